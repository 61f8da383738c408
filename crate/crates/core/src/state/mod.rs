//! Validated multiphase state: quadrature of the phase space, densities,
//! velocities, tangent vectors, momentum cosets and dual cotangent vectors.

mod coset;
mod density;
mod quadrature;
mod validate;
mod velocity;

pub use coset::{normalize_coset, normalize_dual_cotangent, DualCotangent, MomentumCoset};
pub use density::{MultiDensity, TangentDensity};
pub use quadrature::{QuadratureSet, WeightMode};
pub use validate::{Check, Report, Validate};
pub use velocity::MultiVelocity;

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};

pub(crate) fn check_fields(quad: &QuadratureSet, grids: impl Iterator<Item = Grid>) -> Result<()> {
    let grids: Vec<Grid> = grids.collect();
    if grids.len() != quad.len() {
        return Err(Error::Structural(format!(
            "expected {} phase fields, got {}",
            quad.len(),
            grids.len()
        )));
    }
    if grids.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::GridMismatch("phase fields live on different grids".into()));
    }
    Ok(())
}

/// `sum_i w_i f_i`.
pub fn weighted_sum(weights: &[f64], fields: &[ScalarField]) -> ScalarField {
    let mut out = ScalarField::zeros(fields[0].grid());
    for (w, f) in weights.iter().zip(fields) {
        out.axpy(*w, f);
    }
    out
}

/// `sum_i w_i v_i`.
pub fn weighted_sum_vector(weights: &[f64], fields: &[VectorField]) -> VectorField {
    let mut out = VectorField::zeros(fields[0].grid());
    for (w, f) in weights.iter().zip(fields) {
        out.axpy(*w, f);
    }
    out
}
