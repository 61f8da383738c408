use crate::error::Result;
use crate::spectral::{curl, directional, grad, integrate, lie_bracket, ScalarField, VectorField};
use crate::state::{normalize_coset, DualCotangent, MomentumCoset, MultiDensity, TangentDensity};

use super::anchor::{anchor, base_pairing};
use super::inertia::pairing;

/// `i_u d alpha` as a vector of 1-form coefficients; zero in 1D.
pub fn interior_differential(alpha: &VectorField, u: &VectorField) -> Result<VectorField> {
    if alpha.grid().dim() == 1 {
        return Ok(VectorField::zeros(alpha.grid()));
    }
    let w = curl(alpha)?;
    VectorField::from_components(vec![(&w * u.component(1)).scaled(-1.0), &w * u.component(0)])
}

/// `d alpha(u, v)`; identically zero in 1D.
pub fn two_form(alpha: &VectorField, u: &VectorField, v: &VectorField) -> Result<ScalarField> {
    Ok(interior_differential(alpha, u)?.dot(v))
}

fn weighted_phase_sum(rho: &MultiDensity, term: impl Fn(usize) -> Result<ScalarField>) -> Result<f64> {
    let mut total = 0.0;
    for (i, (r, w)) in rho.rho().iter().zip(rho.weights()).enumerate() {
        total += w * integrate(&(&term(i)? * r));
    }
    Ok(total)
}

fn check_shapes(a: &MomentumCoset, rho: &MultiDensity, xs: &[&DualCotangent]) -> Result<()> {
    a.co_closed_residual(rho)?;
    for x in xs {
        x.v().flux(rho)?;
    }
    Ok(())
}

/// Poisson tensor at `([alpha], rho)` evaluated on the cotangent vectors
/// `x = (u, [f])`, `y = (v, [g])`:
/// `sum_i w_i int (-d alpha_i(u_i, v_i) + u_i . grad g_i - v_i . grad f_i) rho_i`.
pub fn poisson_tensor(a: &MomentumCoset, rho: &MultiDensity, x: &DualCotangent, y: &DualCotangent) -> Result<f64> {
    check_shapes(a, rho, &[x, y])?;
    weighted_phase_sum(rho, |i| {
        let (u, v) = (x.v().phase(i), y.v().phase(i));
        let mut t = two_form(&a.alpha()[i], u, v)?.scaled(-1.0);
        t += &directional(u, &y.f()[i]);
        t -= &directional(v, &x.f()[i]);
        Ok(t)
    })
}

/// The same tensor written as a Lie-Poisson term plus corrections:
/// `sum_i w_i int (alpha_i . [u_i, v_i] + v_i . grad(alpha_i . u_i - f_i)
/// - u_i . grad(alpha_i . v_i - g_i)) rho_i`.
pub fn poisson_tensor_lie_form(
    a: &MomentumCoset,
    rho: &MultiDensity,
    x: &DualCotangent,
    y: &DualCotangent,
) -> Result<f64> {
    check_shapes(a, rho, &[x, y])?;
    weighted_phase_sum(rho, |i| {
        let (u, v, alpha) = (x.v().phase(i), y.v().phase(i), &a.alpha()[i]);
        let mut t = alpha.dot(&lie_bracket(u, v));
        t += &directional(v, &(&alpha.dot(u) - &x.f()[i]));
        t -= &directional(u, &(&alpha.dot(v) - &y.f()[i]));
        Ok(t)
    })
}

/// Hamiltonian operator applied to `x = (u, [f])`:
/// `(-[i_u d alpha] - [d f], -L_u rho)`.
pub fn hamiltonian_operator(
    a: &MomentumCoset,
    rho: &MultiDensity,
    x: &DualCotangent,
) -> Result<(MomentumCoset, TangentDensity)> {
    let xi = anchor(x.v(), rho)?;
    let raw = a
        .alpha()
        .iter()
        .zip(x.v().fields())
        .zip(x.f())
        .map(|((alpha, u), f)| {
            let mut r = interior_differential(alpha, u)?;
            r.axpy(1.0, &grad(f));
            r.scale(-1.0);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((normalize_coset(raw, rho)?, xi))
}

/// Pairing of a cotangent vector `y = (v, [g])` with a tangent vector
/// `(da, xi)` of the dual bundle.
pub fn cotangent_pairing(
    y: &DualCotangent,
    tangent: &(MomentumCoset, TangentDensity),
    rho: &MultiDensity,
) -> Result<f64> {
    Ok(pairing(&tangent.0, y.v(), rho)? + base_pairing(y.f(), &tangent.1))
}
