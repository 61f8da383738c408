use crate::error::{Error, Result};
use crate::spectral::{div, grad, solve_poisson, Grid, ScalarField, VectorField};
use crate::state::{check_fields, weighted_sum_vector, MultiDensity, MultiVelocity, QuadratureSet};
use crate::tolerance;

/// Tuple of 1-forms modulo a common exact form, stored as its co-closed
/// representative: `div(sum_i w_i rho_i alpha_i) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumCoset {
    quad: QuadratureSet,
    alpha: Vec<VectorField>,
}

/// `div(sum_i w_i rho_i alpha_i)`.
fn weighted_divergence(alpha: &[VectorField], rho: &MultiDensity) -> ScalarField {
    let weighted: Vec<VectorField> = alpha.iter().zip(rho.rho()).map(|(a, r)| a.mul_scalar(r)).collect();
    div(&weighted_sum_vector(rho.weights(), &weighted))
}

/// Co-closed representative of the coset of `alpha_raw`: adds the common
/// exact form `grad f` with `lap f = -div(sum_i w_i rho_i alpha_i)`.
pub fn normalize_coset(alpha_raw: Vec<VectorField>, rho: &MultiDensity) -> Result<MomentumCoset> {
    check_fields(rho.quad(), alpha_raw.iter().map(VectorField::grid))?;
    rho.check_compatible(rho.quad(), alpha_raw[0].grid())?;
    let source = weighted_divergence(&alpha_raw, rho);
    let f = solve_poisson(&source.scaled(-1.0))?;
    let df = grad(&f);
    let alpha = alpha_raw
        .into_iter()
        .map(|mut a| {
            a.axpy(1.0, &df);
            a
        })
        .collect();
    Ok(MomentumCoset {
        quad: rho.quad().clone(),
        alpha,
    })
}

impl MomentumCoset {
    pub fn zero(rho: &MultiDensity) -> Self {
        Self {
            quad: rho.quad().clone(),
            alpha: vec![VectorField::zeros(rho.grid()); rho.phases()],
        }
    }

    /// Wraps a representative that is already co-closed with respect to
    /// `rho`, failing if it is not.
    pub fn from_normal_form(alpha: Vec<VectorField>, rho: &MultiDensity) -> Result<Self> {
        check_fields(rho.quad(), alpha.iter().map(VectorField::grid))?;
        rho.check_compatible(rho.quad(), alpha[0].grid())?;
        let coset = Self {
            quad: rho.quad().clone(),
            alpha,
        };
        coset.require_normal_form(rho)?;
        Ok(coset)
    }

    pub fn quad(&self) -> &QuadratureSet {
        &self.quad
    }

    pub fn phases(&self) -> usize {
        self.alpha.len()
    }

    pub fn grid(&self) -> Grid {
        self.alpha[0].grid()
    }

    pub fn alpha(&self) -> &[VectorField] {
        &self.alpha
    }

    pub fn into_fields(self) -> Vec<VectorField> {
        self.alpha
    }

    /// `|| div(sum_i w_i rho_i alpha_i) ||_2`.
    pub fn co_closed_residual(&self, rho: &MultiDensity) -> Result<f64> {
        rho.check_compatible(&self.quad, self.grid())?;
        Ok(weighted_divergence(&self.alpha, rho).l2_norm())
    }

    pub(crate) fn require_normal_form(&self, rho: &MultiDensity) -> Result<()> {
        let residual = self.co_closed_residual(rho)?;
        let scale = 1.0 + self.alpha.iter().fold(0.0_f64, |m, a| m.max(a.max_abs()));
        if residual > tolerance::CONSTRAINT * scale {
            return Err(Error::NormalForm {
                residual,
                tolerance: tolerance::CONSTRAINT * scale,
            });
        }
        Ok(())
    }

    /// `self + alpha * other`; stays in normal form when both are normal
    /// with respect to the same density.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        for (a, b) in self.alpha.iter_mut().zip(&other.alpha) {
            a.axpy(alpha, b);
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            quad: self.quad.clone(),
            alpha: self.alpha.iter().map(|a| a.scaled(alpha)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.iter().fold(0.0_f64, |m, a| m.max(a.max_abs()))
    }
}

/// Normal form of a function tuple modulo `(h + c_1, ..., h + c_n)`:
/// subtract the last component from all, then each component's mean.
pub fn normalize_dual_cotangent(f_raw: Vec<ScalarField>) -> Vec<ScalarField> {
    let Some(last) = f_raw.last().cloned() else {
        return f_raw;
    };
    f_raw
        .into_iter()
        .map(|f| {
            let shifted = &f - &last;
            let mean = shifted.mean();
            shifted.map(|v| v - mean)
        })
        .collect()
}

/// Cotangent vector to the dual algebroid: a fiber part `v` and a function
/// tuple coset `[f]` in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCotangent {
    v: MultiVelocity,
    f: Vec<ScalarField>,
}

impl DualCotangent {
    /// Normalizes `f_raw` on the way in.
    pub fn new(v: MultiVelocity, f_raw: Vec<ScalarField>) -> Result<Self> {
        check_fields(v.quad(), f_raw.iter().map(ScalarField::grid))?;
        if f_raw[0].grid() != v.grid() {
            return Err(Error::GridMismatch("function tuple and velocity differ".into()));
        }
        Ok(Self {
            v,
            f: normalize_dual_cotangent(f_raw),
        })
    }

    pub fn zero(quad: QuadratureSet, grid: Grid) -> Self {
        let n = quad.len();
        Self {
            v: MultiVelocity::zeros(quad, grid),
            f: vec![ScalarField::zeros(grid); n],
        }
    }

    pub fn v(&self) -> &MultiVelocity {
        &self.v
    }

    pub fn f(&self) -> &[ScalarField] {
        &self.f
    }

    pub fn into_parts(self) -> (MultiVelocity, Vec<ScalarField>) {
        (self.v, self.f)
    }
}
