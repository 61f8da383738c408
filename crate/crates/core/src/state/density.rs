use crate::error::{Error, Result};
use crate::spectral::{integrate, Grid, ScalarField};
use crate::state::{check_fields, weighted_sum, QuadratureSet, WeightMode};

/// Phase densities `rho_i` (coefficients against the volume form) together
/// with the quadrature of the phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiDensity {
    quad: QuadratureSet,
    rho: Vec<ScalarField>,
}

impl MultiDensity {
    /// Checks shapes only; the constraints are reported by validation.
    pub fn new(quad: QuadratureSet, rho: Vec<ScalarField>) -> Result<Self> {
        check_fields(&quad, rho.iter().map(ScalarField::grid))?;
        Ok(Self { quad, rho })
    }

    /// Builds the quadrature from `mode` and takes masses from the fields.
    pub fn from_mode(mode: WeightMode, rho: Vec<ScalarField>) -> Result<Self> {
        let masses = rho.iter().map(integrate).collect();
        Self::new(QuadratureSet::from_mode(mode, masses)?, rho)
    }

    pub fn quad(&self) -> &QuadratureSet {
        &self.quad
    }

    pub fn weights(&self) -> &[f64] {
        self.quad.weights()
    }

    pub fn phases(&self) -> usize {
        self.rho.len()
    }

    pub fn grid(&self) -> Grid {
        self.rho[0].grid()
    }

    pub fn rho(&self) -> &[ScalarField] {
        &self.rho
    }

    pub fn phase(&self, i: usize) -> &ScalarField {
        &self.rho[i]
    }

    pub fn into_fields(self) -> Vec<ScalarField> {
        self.rho
    }

    /// `sum_i w_i rho_i` at every node.
    pub fn weighted_sum(&self) -> ScalarField {
        weighted_sum(self.weights(), &self.rho)
    }

    /// `max |sum_i w_i rho_i - 1|`.
    pub fn constraint_inf(&self) -> f64 {
        self.weighted_sum()
            .values()
            .iter()
            .fold(0.0_f64, |m, s| m.max((s - 1.0).abs()))
    }

    /// Current `int rho_i` for every phase.
    pub fn current_masses(&self) -> Vec<f64> {
        self.rho.iter().map(integrate).collect()
    }

    /// Smallest value of each phase.
    pub fn minima(&self) -> Vec<f64> {
        self.rho.iter().map(ScalarField::min).collect()
    }

    /// Same quadrature, new fields.
    pub fn with_fields(&self, rho: Vec<ScalarField>) -> Result<Self> {
        Self::new(self.quad.clone(), rho)
    }

    /// Divides every phase by the pointwise weighted sum.
    pub fn renormalized(&self) -> Self {
        let sum = self.weighted_sum();
        let rho = self.rho.iter().map(|r| r.zip_map(&sum, |a, s| a / s)).collect();
        Self {
            quad: self.quad.clone(),
            rho,
        }
    }

    pub(crate) fn check_compatible(&self, quad: &QuadratureSet, grid: Grid) -> Result<()> {
        if quad.len() != self.phases() {
            return Err(Error::Structural(format!(
                "{} phases do not match a density with {} phases",
                quad.len(),
                self.phases()
            )));
        }
        self.quad.check_same(quad)?;
        if grid != self.grid() {
            return Err(Error::GridMismatch("field grid differs from density grid".into()));
        }
        Ok(())
    }
}

/// Tangent vector `xi` to the space of multiphase densities.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentDensity {
    quad: QuadratureSet,
    xi: Vec<ScalarField>,
}

impl TangentDensity {
    pub fn new(quad: QuadratureSet, xi: Vec<ScalarField>) -> Result<Self> {
        check_fields(&quad, xi.iter().map(ScalarField::grid))?;
        Ok(Self { quad, xi })
    }

    pub fn zeros(quad: QuadratureSet, grid: Grid) -> Self {
        let xi = vec![ScalarField::zeros(grid); quad.len()];
        Self { quad, xi }
    }

    pub fn quad(&self) -> &QuadratureSet {
        &self.quad
    }

    pub fn phases(&self) -> usize {
        self.xi.len()
    }

    pub fn grid(&self) -> Grid {
        self.xi[0].grid()
    }

    pub fn xi(&self) -> &[ScalarField] {
        &self.xi
    }

    pub fn into_fields(self) -> Vec<ScalarField> {
        self.xi
    }

    pub fn weighted_sum(&self) -> ScalarField {
        weighted_sum(self.quad.weights(), &self.xi)
    }

    pub fn max_abs(&self) -> f64 {
        self.xi.iter().fold(0.0_f64, |m, f| m.max(f.max_abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalization_restores_the_constraint() {
        let g = Grid::new(1, 16).unwrap();
        let a = ScalarField::from_fn(g, |[x, _]| 0.6 + 0.1 * x.sin());
        let b = ScalarField::from_fn(g, |[x, _]| 0.5 - 0.1 * x.cos());
        let rho = MultiDensity::from_mode(WeightMode::Unit, vec![a, b]).unwrap();
        assert!(rho.constraint_inf() > 0.05);
        assert!(rho.renormalized().constraint_inf() < 1e-15);
    }

    #[test]
    fn structural_mismatch() {
        let g = Grid::new(1, 16).unwrap();
        let h = Grid::new(1, 32).unwrap();
        let quad = QuadratureSet::from_mode(WeightMode::Unit, vec![1.0, 1.0]).unwrap();
        let bad = MultiDensity::new(quad.clone(), vec![ScalarField::zeros(g)]);
        assert!(matches!(bad, Err(Error::Structural(_))));
        let mixed = MultiDensity::new(quad, vec![ScalarField::zeros(g), ScalarField::zeros(h)]);
        assert!(matches!(mixed, Err(Error::GridMismatch(_))));
    }
}
