use std::fmt;

use crate::error::Result;
use crate::spectral::{integrate, Grid};
use crate::state::{DualCotangent, MomentumCoset, MultiDensity, MultiVelocity, QuadratureSet, TangentDensity};
use crate::tolerance;

/// Outcome of one invariant check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    /// Passes when `min > 0`; the residual is the minimum itself.
    pub fn positive(name: impl Into<String>, min: f64) -> Self {
        Self {
            name: name.into(),
            residual: min,
            tolerance: 0.0,
            passed: min > 0.0,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

/// Per-invariant residuals with a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub subject: &'static str,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: &'static str) -> Self {
        Self {
            subject,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {:<28} residual {:.3e} (tolerance {:.1e})",
                if c.passed { "ok" } else { "!!" },
                c.name,
                c.residual,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

/// Reports invariant residuals without mutating; fails only on malformed
/// input.
pub trait Validate {
    fn validate(&self) -> Result<Report>;
}

impl Validate for (&QuadratureSet, Grid) {
    fn validate(&self) -> Result<Report> {
        let (quad, grid) = *self;
        let mut r = Report::new("quadrature");
        r.push(Check::holds("phase count", !quad.is_empty()));
        let min_w = quad.weights().iter().copied().fold(f64::INFINITY, f64::min);
        let min_c = quad.masses().iter().copied().fold(f64::INFINITY, f64::min);
        r.push(Check::positive("weight positivity", min_w));
        r.push(Check::positive("mass positivity", min_c));
        r.push(Check::at_most(
            "total mass",
            (quad.total_mass() - grid.volume()).abs(),
            tolerance::QUADRATURE_MASS,
        ));
        Ok(r)
    }
}

impl Validate for MultiDensity {
    fn validate(&self) -> Result<Report> {
        let mut r = Report::new("multiphase density");
        r.extend((self.quad(), self.grid()).validate()?);
        r.push(Check::holds("finite", self.rho().iter().all(|f| f.is_finite())));
        let min = self.minima().into_iter().fold(f64::INFINITY, f64::min);
        r.push(Check::positive("positivity", min));
        r.push(Check::at_most(
            "pointwise sum",
            self.constraint_inf(),
            tolerance::DENSITY_SUM,
        ));
        let mass = self
            .current_masses()
            .iter()
            .zip(self.quad().masses())
            .fold(0.0_f64, |m, (a, c)| m.max((a - c).abs()));
        r.push(Check::at_most("masses", mass, tolerance::MASS));
        Ok(r)
    }
}

impl Validate for MultiVelocity {
    fn validate(&self) -> Result<Report> {
        let mut r = Report::new("multiphase velocity");
        r.push(Check::holds("finite", self.fields().iter().all(|v| v.is_finite())));
        Ok(r)
    }
}

/// Velocity checked against the fiber over a density.
impl Validate for (&MultiVelocity, &MultiDensity) {
    fn validate(&self) -> Result<Report> {
        let (u, rho) = *self;
        let mut r = u.validate()?;
        r.push(Check::at_most(
            "divergence constraint",
            u.constraint_residual(rho)?,
            tolerance::CONSTRAINT,
        ));
        Ok(r)
    }
}

impl Validate for TangentDensity {
    fn validate(&self) -> Result<Report> {
        let mut r = Report::new("tangent density");
        let scale = 1.0 + self.max_abs();
        r.push(Check::holds("finite", self.xi().iter().all(|f| f.is_finite())));
        r.push(Check::at_most(
            "pointwise weighted sum",
            self.weighted_sum().max_abs(),
            tolerance::TANGENT * scale,
        ));
        let integral = self.xi().iter().fold(0.0_f64, |m, f| m.max(integrate(f).abs()));
        r.push(Check::at_most("integrals", integral, tolerance::TANGENT * scale));
        Ok(r)
    }
}

impl Validate for (&MomentumCoset, &MultiDensity) {
    fn validate(&self) -> Result<Report> {
        let (a, rho) = *self;
        let mut r = Report::new("momentum coset");
        r.push(Check::holds("finite", a.alpha().iter().all(|v| v.is_finite())));
        r.push(Check::at_most(
            "co-closed",
            a.co_closed_residual(rho)?,
            tolerance::CONSTRAINT * (1.0 + a.max_abs()),
        ));
        Ok(r)
    }
}

impl Validate for DualCotangent {
    fn validate(&self) -> Result<Report> {
        let mut r = Report::new("dual cotangent");
        r.extend(self.v().validate()?);
        let f = self.f();
        let scale = 1.0 + f.iter().fold(0.0_f64, |m, g| m.max(g.max_abs()));
        let last = f.last().map_or(0.0, |g| g.max_abs());
        let mean = f.iter().fold(0.0_f64, |m, g| m.max(g.mean().abs()));
        r.push(Check::at_most(
            "last component zero",
            last,
            tolerance::FUNCTION_COSET * scale,
        ));
        r.push(Check::at_most("mean zero", mean, tolerance::FUNCTION_COSET * scale));
        Ok(r)
    }
}
