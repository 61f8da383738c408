use crate::error::Result;
use crate::state::{normalize_coset, MomentumCoset, MultiDensity, MultiVelocity};

use super::anchor::require_constrained;

/// `u -> [u^flat]`; on the flat torus the 1-form has the same components.
pub fn inertia(u: &MultiVelocity, rho: &MultiDensity) -> Result<MomentumCoset> {
    require_constrained(u, rho)?;
    normalize_coset(u.fields().to_vec(), rho)
}

/// Sharp of the co-closed representative, which lies in the fiber over `rho`.
pub fn inertia_inverse(a: &MomentumCoset, rho: &MultiDensity) -> Result<MultiVelocity> {
    a.require_normal_form(rho)?;
    MultiVelocity::new(a.quad().clone(), a.alpha().to_vec())
}

/// `sum_i w_i int alpha_i(u_i) rho_i`.
pub fn pairing(a: &MomentumCoset, u: &MultiVelocity, rho: &MultiDensity) -> Result<f64> {
    let alpha = MultiVelocity::new(a.quad().clone(), a.alpha().to_vec())?;
    alpha.inner(u, rho)
}
