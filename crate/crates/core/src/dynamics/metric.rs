use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{grad, integrate, solve_weighted_poisson, ScalarField};
use crate::state::{MultiDensity, TangentDensity, Validate};

/// Tangent norm of `xi` at `rho` in the product of Wasserstein metrics:
/// `sum_i w_i int |grad f_i|^2 rho_i` with `div(rho_i grad f_i) = -xi_i`.
/// Also returns the potentials `f_i`.
pub fn mdens_metric(xi: &TangentDensity, rho: &MultiDensity) -> Result<(f64, Vec<ScalarField>)> {
    rho.check_compatible(xi.quad(), xi.grid())?;
    let report = xi.validate()?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::InvalidTangent(format!(
            "{} residual {:e} exceeds {:e}",
            bad.name, bad.residual, bad.tolerance
        )));
    }
    let potentials: Vec<ScalarField> = xi
        .xi()
        .par_iter()
        .zip(rho.rho().par_iter())
        .map(|(x, r)| solve_weighted_poisson(r, &x.scaled(-1.0)))
        .collect::<Result<_>>()?;
    let value = potentials
        .iter()
        .zip(rho.rho())
        .zip(rho.weights())
        .map(|((f, r), w)| w * integrate(&(&grad(f).norm_sq() * r)))
        .sum();
    Ok((value, potentials))
}
