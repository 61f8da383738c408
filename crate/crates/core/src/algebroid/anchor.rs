use crate::error::{Error, Result};
use crate::spectral::{div, grad, integrate, ScalarField};
use crate::state::{normalize_coset, MomentumCoset, MultiDensity, MultiVelocity, TangentDensity};
use crate::tolerance;

pub(crate) fn require_constrained(u: &MultiVelocity, rho: &MultiDensity) -> Result<()> {
    let residual = u.constraint_residual(rho)?;
    let allowed = tolerance::CONSTRAINT * u.max_abs().max(1.0);
    if !(residual <= allowed) {
        return Err(Error::ConstraintViolation {
            residual,
            tolerance: allowed,
        });
    }
    Ok(())
}

/// `xi_i = -div(rho_i u_i)`, without checking that `u` is in the fiber.
fn anchor_unchecked(u: &MultiVelocity, rho: &MultiDensity) -> Result<TangentDensity> {
    let xi = u
        .fields()
        .iter()
        .zip(rho.rho())
        .map(|(u, r)| div(&u.mul_scalar(r)).scaled(-1.0))
        .collect();
    TangentDensity::new(rho.quad().clone(), xi)
}

/// Anchor map: the density tangent `-L_u rho`, i.e. `xi_i = -div(rho_i u_i)`.
pub fn anchor(u: &MultiVelocity, rho: &MultiDensity) -> Result<TangentDensity> {
    require_constrained(u, rho)?;
    anchor_unchecked(u, rho)
}

/// Dual anchor: the coset of `(grad f_1, ..., grad f_n)`, co-closed.
pub fn anchor_dual(f: &[ScalarField], rho: &MultiDensity) -> Result<MomentumCoset> {
    normalize_coset(f.iter().map(grad).collect(), rho)
}

/// `sum_i w_i int f_i xi_i`, the pairing of a function tuple with a density
/// tangent.
pub fn base_pairing(f: &[ScalarField], xi: &TangentDensity) -> f64 {
    f.iter()
        .zip(xi.xi())
        .zip(xi.quad().weights())
        .map(|((f, x), w)| w * integrate(&(f * x)))
        .sum()
}
