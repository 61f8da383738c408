use crate::error::Result;
use crate::spectral::{div, Grid, VectorField};
use crate::state::{check_fields, weighted_sum_vector, MultiDensity, QuadratureSet};

/// One velocity field per phase.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVelocity {
    quad: QuadratureSet,
    u: Vec<VectorField>,
}

impl MultiVelocity {
    pub fn new(quad: QuadratureSet, u: Vec<VectorField>) -> Result<Self> {
        check_fields(&quad, u.iter().map(VectorField::grid))?;
        Ok(Self { quad, u })
    }

    pub fn zeros(quad: QuadratureSet, grid: Grid) -> Self {
        let u = vec![VectorField::zeros(grid); quad.len()];
        Self { quad, u }
    }

    pub fn quad(&self) -> &QuadratureSet {
        &self.quad
    }

    pub fn phases(&self) -> usize {
        self.u.len()
    }

    pub fn grid(&self) -> Grid {
        self.u[0].grid()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.u
    }

    pub fn phase(&self, i: usize) -> &VectorField {
        &self.u[i]
    }

    pub fn into_fields(self) -> Vec<VectorField> {
        self.u
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0_f64, |m, v| m.max(v.max_abs()))
    }

    /// `sum_i w_i rho_i u_i`.
    pub fn flux(&self, rho: &MultiDensity) -> Result<VectorField> {
        rho.check_compatible(&self.quad, self.grid())?;
        let weighted: Vec<VectorField> = self.u.iter().zip(rho.rho()).map(|(u, r)| u.mul_scalar(r)).collect();
        Ok(weighted_sum_vector(self.quad.weights(), &weighted))
    }

    /// `|| div(sum_i w_i rho_i u_i) ||_2`, the distance from the fiber over `rho`.
    pub fn constraint_residual(&self, rho: &MultiDensity) -> Result<f64> {
        Ok(div(&self.flux(rho)?).l2_norm())
    }

    /// `sum_i w_i int |u_i|^2 rho_i`.
    pub fn norm_sq(&self, rho: &MultiDensity) -> Result<f64> {
        self.inner(self, rho)
    }

    /// `sum_i w_i int (u_i . v_i) rho_i`.
    pub fn inner(&self, other: &Self, rho: &MultiDensity) -> Result<f64> {
        rho.check_compatible(&self.quad, self.grid())?;
        rho.check_compatible(&other.quad, other.grid())?;
        let cell = self.grid().cell_volume();
        Ok(self
            .u
            .iter()
            .zip(&other.u)
            .zip(rho.rho())
            .zip(self.quad.weights())
            .map(|(((a, b), r), w)| {
                let dot = a.dot(b);
                w * dot.values().iter().zip(r.values()).map(|(d, r)| d * r).sum::<f64>() * cell
            })
            .sum())
    }

    /// Same quadrature, new fields.
    pub fn with_fields(&self, u: Vec<VectorField>) -> Result<Self> {
        Self::new(self.quad.clone(), u)
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            a.axpy(alpha, b);
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            quad: self.quad.clone(),
            u: self.u.iter().map(|v| v.scaled(alpha)).collect(),
        }
    }
}
