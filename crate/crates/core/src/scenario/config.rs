use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::WeightMode;

/// Built-in initial data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Single-phase stationary Taylor-Green vortex (2D).
    TaylorGreen,
    /// Several phases sharing one divergence-free velocity.
    EqualVelocity,
    /// Two interpenetrating phases in smooth counter-shear over a common
    /// unsteady flow (2D).
    TwoPhaseShear,
    /// Two phases in 1D with opposite velocities.
    OneDTwoPhase,
    /// Trapezoid quadrature of a continuum of phases labelled by `a in [0, 1]`.
    Continuum,
    /// Every phase velocity is a gradient.
    Potential,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::TaylorGreen,
        ScenarioKind::EqualVelocity,
        ScenarioKind::TwoPhaseShear,
        ScenarioKind::OneDTwoPhase,
        ScenarioKind::Continuum,
        ScenarioKind::Potential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::TaylorGreen => "taylor_green",
            ScenarioKind::EqualVelocity => "equal_velocity",
            ScenarioKind::TwoPhaseShear => "two_phase_shear",
            ScenarioKind::OneDTwoPhase => "one_d_two_phase",
            ScenarioKind::Continuum => "continuum",
            ScenarioKind::Potential => "potential",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Validation {
                field: "scenario".into(),
                reason: format!(
                    "unknown scenario `{name}` (expected one of {})",
                    Self::ALL.map(Self::name).join(", ")
                ),
            })
    }

    /// Dimension used when none is configured.
    pub fn default_dim(self) -> usize {
        match self {
            ScenarioKind::OneDTwoPhase => 1,
            _ => 2,
        }
    }

    pub fn default_phases(self) -> usize {
        match self {
            ScenarioKind::TaylorGreen => 1,
            ScenarioKind::Continuum => 8,
            _ => 2,
        }
    }

    pub fn weight_mode(self) -> WeightMode {
        match self {
            ScenarioKind::Continuum => WeightMode::Trapezoid,
            _ => WeightMode::Unit,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional structure checks carried along a `run`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    #[serde(default)]
    pub kelvin: bool,
    #[serde(default)]
    pub pushforward: bool,
    #[serde(default)]
    pub consistency: bool,
}

/// Tangent density for the `metric` subcommand:
/// `xi_i = amplitude * c_i * cos(kx x + ky y)` with phase coefficients
/// `c_i` that sum to zero under the quadrature weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentConfig {
    #[serde(default = "default_tangent_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_kx")]
    pub kx: i32,
    #[serde(default)]
    pub ky: i32,
}

impl Default for TangentConfig {
    fn default() -> Self {
        Self {
            amplitude: default_tangent_amplitude(),
            kx: default_kx(),
            ky: 0,
        }
    }
}

fn default_tangent_amplitude() -> f64 {
    0.1
}

fn default_kx() -> i32 {
    1
}

fn default_stride() -> usize {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// A scenario run, as read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    /// Number of phases, or of quadrature nodes for `continuum`.
    #[serde(default)]
    pub phases: Option<usize>,
    #[serde(default)]
    pub weights: Option<WeightMode>,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    /// Diagnostics and snapshots every `stride` steps.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Velocity scale of the scenario.
    #[serde(default)]
    pub amplitude: Option<f64>,
    /// Density perturbation.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Relative velocity between phases.
    #[serde(default)]
    pub shear: Option<f64>,
    #[serde(default)]
    pub dealias: bool,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub tangent: Option<TangentConfig>,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        reason: reason.into(),
    }
}

impl ScenarioConfig {
    /// Defaults for `kind` at resolution `n`, as used by `--scenario`.
    pub fn preset(kind: ScenarioKind, n: usize) -> Self {
        Self {
            scenario: kind,
            dim: None,
            n,
            phases: None,
            weights: None,
            dt: 1e-3,
            t_end: 0.1,
            stride: 10,
            out: default_out(),
            seed: 0,
            amplitude: None,
            epsilon: None,
            shear: None,
            dealias: false,
            checks: Checks::default(),
            tangent: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim.unwrap_or(self.scenario.default_dim())
    }

    pub fn phases(&self) -> usize {
        self.phases.unwrap_or(self.scenario.default_phases())
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weights.unwrap_or(self.scenario.weight_mode())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("T", format!("must be positive and finite, got {}", self.t_end)));
        }
        if self.n < 16 || !self.n.is_power_of_two() {
            return Err(invalid("N", format!("must be a power of two >= 16, got {}", self.n)));
        }
        if self.stride < 1 {
            return Err(invalid("stride", "must be at least 1"));
        }
        let dim = self.dim();
        if dim != 1 && dim != 2 {
            return Err(invalid("dim", format!("must be 1 or 2, got {dim}")));
        }
        let phases = self.phases();
        if phases < 1 {
            return Err(invalid("phases", "must be at least 1"));
        }
        use ScenarioKind::*;
        match (self.scenario, dim) {
            (TaylorGreen | TwoPhaseShear, 1) => {
                return Err(invalid(
                    "dim",
                    format!("scenario `{}` is two-dimensional", self.scenario),
                ))
            }
            (OneDTwoPhase, 2) => return Err(invalid("dim", "scenario `one_d_two_phase` is one-dimensional")),
            _ => {}
        }
        match (self.scenario, phases) {
            (TaylorGreen, p) if p != 1 => return Err(invalid("phases", "taylor_green has exactly one phase")),
            (TwoPhaseShear | OneDTwoPhase, p) if p != 2 => {
                return Err(invalid(
                    "phases",
                    format!("scenario `{}` has exactly two phases", self.scenario),
                ))
            }
            (Continuum, p) if p < 2 => return Err(invalid("phases", "continuum needs at least 2 quadrature nodes")),
            _ => {}
        }
        if self.weight_mode() != self.scenario.weight_mode() {
            return Err(invalid(
                "weights",
                format!(
                    "scenario `{}` uses {:?} weights",
                    self.scenario,
                    self.scenario.weight_mode()
                )
                .to_lowercase(),
            ));
        }
        for (field, v) in [("amplitude", self.amplitude), ("shear", self.shear)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(invalid(field, "must be finite"));
                }
            }
        }
        if let Some(e) = self.epsilon {
            let limit = match self.weight_mode() {
                WeightMode::Unit => 1.0 / phases as f64,
                WeightMode::Trapezoid => 1.0,
            };
            if !(e >= 0.0 && e < limit) {
                return Err(invalid(
                    "epsilon",
                    format!("must lie in [0, {limit}) to keep densities positive, got {e}"),
                ));
            }
        }
        if self.checks.kelvin && dim != 2 {
            return Err(invalid("checks.kelvin", "vorticity transport needs a 2D scenario"));
        }
        if self.checks.pushforward && dim != 1 {
            return Err(invalid("checks.pushforward", "flow-map tracking needs a 1D scenario"));
        }
        if let Some(t) = self.tangent {
            if !t.amplitude.is_finite() {
                return Err(invalid("tangent.amplitude", "must be finite"));
            }
            if dim == 1 && t.ky != 0 {
                return Err(invalid("tangent.ky", "must be 0 in 1D"));
            }
            if t.kx == 0 && t.ky == 0 {
                return Err(invalid("tangent.kx", "the tangent must have a nonzero wavenumber"));
            }
        }
        Ok(())
    }
}

/// Parses and validates a config from TOML text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
scenario = "taylor_green"
dim = 2
N = 64
dt = 1e-3
T = 1.0
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::TaylorGreen);
        assert_eq!((cfg.dim(), cfg.n, cfg.phases(), cfg.stride), (2, 64, 1, 1));
        assert_eq!(cfg.weight_mode(), WeightMode::Unit);
    }

    #[test]
    fn negative_dt_names_the_field() {
        let err = parse_config(&MINIMAL.replace("dt = 1e-3", "dt = -1")).unwrap_err();
        assert!(
            matches!(&err, Error::Validation { field, .. } if field == "dt"),
            "{err}"
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(&format!("{MINIMAL}viscosity = 0.01\n")).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("viscosity")), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config("scenario = \"taylor_green\"\nN = = 3\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn structural_mismatches_are_caught() {
        let bad = [
            (MINIMAL.replace("N = 64", "N = 48"), "N"),
            (MINIMAL.replace("N = 64", "N = 8"), "N"),
            (MINIMAL.replace("dim = 2", "dim = 1"), "dim"),
            (MINIMAL.replace("T = 1.0", "T = 0.0"), "T"),
            (format!("{MINIMAL}phases = 3\n"), "phases"),
            (format!("{MINIMAL}stride = 0\n"), "stride"),
            (format!("{MINIMAL}weights = \"trapezoid\"\n"), "weights"),
            (format!("{MINIMAL}[checks]\npushforward = true\n"), "checks.pushforward"),
        ];
        for (text, field) in bad {
            let err = parse_config(&text).unwrap_err();
            assert!(
                matches!(&err, Error::Validation { field: f, .. } if f == field),
                "{field}: {err}"
            );
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(ScenarioKind::from_name(k.name()).unwrap(), k);
        }
        assert!(ScenarioKind::from_name("vortex_sheet").is_err());
    }
}
