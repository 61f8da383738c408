use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{grad, lie_bracket, ScalarField, VectorField};
use crate::state::{MultiDensity, MultiVelocity, TangentDensity};

use super::anchor::anchor;
use super::projection::project_constraint;

type SectionFn = dyn Fn(&MultiDensity) -> Result<MultiVelocity> + Send + Sync;

/// Default finite-difference step for derivatives along the density space.
pub const DEFAULT_SECTION_STEP: f64 = 1e-4;

/// A section of the algebroid: assigns to every density a velocity in the
/// fiber over it. Evaluation must be free of side effects.
#[derive(Clone)]
pub struct Section {
    eval: Arc<SectionFn>,
    step: f64,
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Section")
            .field("step", &self.step)
            .finish_non_exhaustive()
    }
}

impl Section {
    pub fn new(eval: impl Fn(&MultiDensity) -> Result<MultiVelocity> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            step: DEFAULT_SECTION_STEP,
        }
    }

    /// `rho -> project_constraint(v, rho)` for a fixed tuple `v`.
    pub fn projected_constant(v: Vec<VectorField>) -> Self {
        Self::new(move |rho| project_constraint(v.clone(), rho))
    }

    /// `rho -> project_constraint(grad f, rho)` for fixed potentials `f`.
    pub fn potential(f: Vec<ScalarField>) -> Self {
        let v: Vec<VectorField> = f.iter().map(grad).collect();
        Self::projected_constant(v)
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn eval(&self, rho: &MultiDensity) -> Result<MultiVelocity> {
        (self.eval)(rho)
    }

    /// `rho -> F(rho) V(rho)` for a scalar functional `F`.
    pub fn scaled_by(&self, functional: impl Fn(&MultiDensity) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self::new(move |rho| Ok(inner.eval(rho)?.scaled(functional(rho)))).with_step(self.step)
    }

    /// The bracket `[U, V]` as a section in its own right.
    pub fn bracket(u: &Section, v: &Section) -> Self {
        let (u, v) = (u.clone(), v.clone());
        let step = u.step.max(v.step);
        Self::new(move |rho| Ok(bracket_sections(&u, &v, rho)?.bracket)).with_step(step)
    }
}

/// Bracket of two sections at a density, with the distance of the result
/// from the fiber.
#[derive(Clone, Debug)]
pub struct BracketValue {
    pub bracket: MultiVelocity,
    pub constraint_residual: f64,
}

fn shifted(rho: &MultiDensity, xi: &TangentDensity, t: f64, step: f64) -> Result<MultiDensity> {
    let fields: Vec<ScalarField> = rho
        .rho()
        .iter()
        .zip(xi.xi())
        .map(|(r, x)| {
            let mut r = r.clone();
            r.axpy(t, x);
            r
        })
        .collect();
    let min = fields.iter().map(ScalarField::min).fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::StepSize { step, min });
    }
    rho.with_fields(fields)
}

/// `d/dt V(rho + t xi)` at `t = 0` by centered differences with step `h`.
pub fn derivative_along(v: &Section, rho: &MultiDensity, xi: &TangentDensity) -> Result<MultiVelocity> {
    let h = v.step;
    let plus = v.eval(&shifted(rho, xi, 0.5 * h, h)?)?;
    let minus = v.eval(&shifted(rho, xi, -0.5 * h, h)?)?;
    let mut d = plus;
    d.axpy(-1.0, &minus);
    Ok(d.scaled(1.0 / h))
}

/// `[U, V](rho) = [U(rho), V(rho)] + L_{#U(rho)} V - L_{#V(rho)} U`.
pub fn bracket_sections(u: &Section, v: &Section, rho: &MultiDensity) -> Result<BracketValue> {
    let u0 = u.eval(rho)?;
    let v0 = v.eval(rho)?;
    let fields = u0
        .fields()
        .iter()
        .zip(v0.fields())
        .map(|(a, b)| lie_bracket(a, b))
        .collect();
    let mut out = MultiVelocity::new(rho.quad().clone(), fields)?;
    out.axpy(1.0, &derivative_along(v, rho, &anchor(&u0, rho)?)?);
    out.axpy(-1.0, &derivative_along(u, rho, &anchor(&v0, rho)?)?);
    let constraint_residual = out.constraint_residual(rho)?;
    Ok(BracketValue {
        bracket: out,
        constraint_residual,
    })
}

/// `||[[U,V],W] + [[V,W],U] + [[W,U],V]||_2`, summed over phases.
pub fn jacobi_residual(u: &Section, v: &Section, w: &Section, rho: &MultiDensity) -> Result<f64> {
    let terms = [
        bracket_sections(&Section::bracket(u, v), w, rho)?,
        bracket_sections(&Section::bracket(v, w), u, rho)?,
        bracket_sections(&Section::bracket(w, u), v, rho)?,
    ];
    let mut total = terms[0].bracket.clone();
    total.axpy(1.0, &terms[1].bracket);
    total.axpy(1.0, &terms[2].bracket);
    Ok(total.fields().iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt())
}
