use std::f64::consts::PI;

use crate::dynamics::FlowState;
use crate::error::Result;
use crate::spectral::{grad, Grid, ScalarField, VectorField};
use crate::state::{weighted_sum, MultiDensity, TangentDensity, WeightMode};

use super::config::{ScenarioConfig, ScenarioKind, TangentConfig};

/// Scenario parameters with defaults filled in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub amplitude: f64,
    pub epsilon: f64,
    pub shear: f64,
}

impl Params {
    pub fn defaults(kind: ScenarioKind) -> Self {
        let (amplitude, epsilon, shear) = match kind {
            ScenarioKind::TaylorGreen => (1.0, 0.0, 0.0),
            ScenarioKind::EqualVelocity => (1.0, 0.2, 0.0),
            ScenarioKind::TwoPhaseShear => (3.0, 0.02, 0.02),
            ScenarioKind::OneDTwoPhase => (0.2, 0.2, 0.0),
            ScenarioKind::Continuum => (1.0, 0.3, 0.1),
            ScenarioKind::Potential => (0.25, 0.2, 0.0),
        };
        Self {
            amplitude,
            epsilon,
            shear,
        }
    }

    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let d = Self::defaults(cfg.scenario);
        Self {
            amplitude: cfg.amplitude.unwrap_or(d.amplitude),
            epsilon: cfg.epsilon.unwrap_or(d.epsilon),
            shear: cfg.shear.unwrap_or(d.shear),
        }
    }
}

fn taylor_green_velocity(g: Grid, a: f64) -> VectorField {
    VectorField::from_fn(g, |[x, y]| [a * x.sin() * y.cos(), -a * x.cos() * y.sin()])
}

/// Unsteady common flow: a Kolmogorov shear, a Taylor-Green cell and a
/// smaller `(2, 3)` cell.
fn common_flow(g: Grid, a: f64) -> VectorField {
    VectorField::from_fn(g, |[x, y]| {
        let (s2x, c2x, s3y, c3y) = ((2.0 * x).sin(), (2.0 * x).cos(), (3.0 * y).sin(), (3.0 * y).cos());
        [
            a * (y.sin() + 0.5 * x.sin() * y.cos() + K23 * 3.0 * s2x * c3y),
            -a * (0.5 * x.cos() * y.sin() + K23 * 2.0 * c2x * s3y),
        ]
    })
}

const K23: f64 = 0.08;

/// `rho_i = 1/n + eps * cos(theta + 2 pi i / n)`, rescaled so that the
/// phases sum to one at every node.
fn rotating_profile(g: Grid, n: usize, eps: f64, theta: impl Fn([f64; 2]) -> f64) -> Vec<ScalarField> {
    let raw: Vec<ScalarField> = (0..n)
        .map(|i| {
            let shift = 2.0 * PI * i as f64 / n as f64;
            let eps = if n == 1 { 0.0 } else { eps };
            ScalarField::from_fn(g, |p| 1.0 / n as f64 + eps * (theta(p) + shift).cos())
        })
        .collect();
    normalized(raw, &vec![1.0; n])
}

fn normalized(raw: Vec<ScalarField>, weights: &[f64]) -> Vec<ScalarField> {
    let total = weighted_sum(weights, &raw);
    raw.iter().map(|r| r.zip_map(&total, |a, t| a / t)).collect()
}

fn phase_axis(g: Grid, [x, y]: [f64; 2]) -> f64 {
    if g.dim() == 1 {
        x
    } else {
        x + y
    }
}

/// Builds the initial state described by a validated config.
pub fn build_scenario(cfg: &ScenarioConfig) -> Result<FlowState> {
    cfg.validate()?;
    let g = Grid::new(cfg.dim(), cfg.n)?;
    let n = cfg.phases();
    let p = Params::from_config(cfg);
    let mode = cfg.weight_mode();
    match cfg.scenario {
        ScenarioKind::TaylorGreen => {
            let rho = MultiDensity::from_mode(mode, vec![ScalarField::constant(g, 1.0)])?;
            FlowState::projected(rho, vec![taylor_green_velocity(g, p.amplitude)])
        }
        ScenarioKind::EqualVelocity => {
            let rho = MultiDensity::from_mode(mode, rotating_profile(g, n, p.epsilon, |q| phase_axis(g, q)))?;
            let u = match g.dim() {
                1 => VectorField::from_fn(g, |_| [p.amplitude, 0.0]),
                _ => taylor_green_velocity(g, p.amplitude),
            };
            FlowState::projected(rho, vec![u; n])
        }
        ScenarioKind::TwoPhaseShear => {
            let rho = MultiDensity::from_mode(
                mode,
                normalized(
                    vec![
                        ScalarField::from_fn(g, |[_, y]| 0.5 + p.epsilon * y.sin()),
                        ScalarField::from_fn(g, |[_, y]| 0.5 - p.epsilon * y.sin()),
                    ],
                    &[1.0, 1.0],
                ),
            )?;
            let w = common_flow(g, p.amplitude);
            let s = VectorField::from_fn(g, |[_, y]| [p.shear * y.cos(), 0.0]);
            FlowState::projected(rho, vec![&w + &s, &w - &s])
        }
        ScenarioKind::OneDTwoPhase => {
            let rho = MultiDensity::from_mode(
                mode,
                normalized(
                    vec![
                        ScalarField::from_fn(g, |[x, _]| 0.5 + p.epsilon * x.cos()),
                        ScalarField::from_fn(g, |[x, _]| 0.5 - p.epsilon * x.cos()),
                    ],
                    &[1.0, 1.0],
                ),
            )?;
            let u = VectorField::from_fn(g, |[x, _]| [p.amplitude * x.sin(), 0.0]);
            FlowState::projected(rho, vec![u.clone(), -&u])
        }
        ScenarioKind::Continuum => {
            let weights = mode.weights(n)?;
            let s: Vec<f64> = mode.labels(n).iter().map(|a| 2.0 * a - 1.0).collect();
            let raw = s
                .iter()
                .map(|&s| {
                    ScalarField::from_fn(g, |[x, y]| {
                        1.0 + p.epsilon * s * if g.dim() == 1 { x.cos() } else { y.sin() }
                    })
                })
                .collect();
            let rho = MultiDensity::from_mode(mode, normalized(raw, &weights))?;
            let u = s
                .iter()
                .map(|&s| match g.dim() {
                    1 => VectorField::from_fn(g, |[x, _]| [p.shear * s * x.sin(), 0.0]),
                    _ => &common_flow(g, p.amplitude) + &VectorField::from_fn(g, |[_, y]| [p.shear * s * y.cos(), 0.0]),
                })
                .collect();
            FlowState::projected(rho, u)
        }
        ScenarioKind::Potential => {
            let rho = MultiDensity::from_mode(mode, rotating_profile(g, n, p.epsilon, |q| phase_axis(g, q)))?;
            let u = (0..n)
                .map(|i| {
                    let ky = (i % 2) as f64;
                    let phase = 0.7 * i as f64;
                    grad(&ScalarField::from_fn(g, |[x, y]| {
                        p.amplitude * (x + ky * y + phase).sin()
                    }))
                })
                .collect();
            FlowState::projected(rho, u)
        }
    }
}

/// Per-phase coefficients `c_i` with `sum_i w_i c_i = 0`.
fn tangent_coefficients(mode: WeightMode, n: usize) -> Vec<f64> {
    match mode {
        WeightMode::Unit => (0..n).map(|i| i as f64 - (n as f64 - 1.0) / 2.0).collect(),
        WeightMode::Trapezoid => mode.labels(n).iter().map(|a| 2.0 * a - 1.0).collect(),
    }
}

/// Tangent density `xi_i = amplitude * c_i * cos(kx x + ky y)` at `rho`.
pub fn build_tangent(t: &TangentConfig, rho: &MultiDensity, mode: WeightMode) -> Result<TangentDensity> {
    let g = rho.grid();
    let (kx, ky) = (t.kx as f64, t.ky as f64);
    let xi = tangent_coefficients(mode, rho.phases())
        .into_iter()
        .map(|c| ScalarField::from_fn(g, |[x, y]| t.amplitude * c * (kx * x + ky * y).cos()))
        .collect();
    TangentDensity::new(rho.quad().clone(), xi)
}
