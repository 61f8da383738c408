use crate::error::Result;
use crate::state::{DualCotangent, MomentumCoset, MultiDensity, MultiVelocity};

use super::inertia::inertia_inverse;

/// Kinetic energy `H = 1/2 sum_i w_i int |alpha_i|^2 rho_i`.
pub fn energy(a: &MomentumCoset, rho: &MultiDensity) -> Result<f64> {
    let alpha = MultiVelocity::new(a.quad().clone(), a.alpha().to_vec())?;
    Ok(0.5 * alpha.norm_sq(rho)?)
}

/// Energy and its differential `(alpha^sharp, 1/2 [|alpha|^2])`.
pub fn energy_and_dh(a: &MomentumCoset, rho: &MultiDensity) -> Result<(f64, DualCotangent)> {
    let u = inertia_inverse(a, rho)?;
    let h = energy(a, rho)?;
    let base = a.alpha().iter().map(|alpha| alpha.norm_sq().scaled(0.5)).collect();
    Ok((h, DualCotangent::new(u, base)?))
}
