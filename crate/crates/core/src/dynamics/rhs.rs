use rayon::prelude::*;

use crate::algebroid::{energy_and_dh, hamiltonian_operator, require_in_fiber};
use crate::error::Result;
use crate::spectral::ops::dealias_field;
use crate::spectral::{curl, div, grad, partial, solve_poisson, ScalarField, VectorField};
use crate::state::{normalize_coset, weighted_sum_vector, MomentumCoset, MultiDensity, MultiVelocity, TangentDensity};

use super::state::FlowState;

/// Switches for the spatial discretization of the nonlinear terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepOptions {
    /// Apply the 2/3 rule after every nonlinear product.
    pub dealias: bool,
}

fn product(a: &ScalarField, b: &ScalarField, opts: StepOptions) -> ScalarField {
    let p = a * b;
    if opts.dealias {
        dealias_field(&p)
    } else {
        p
    }
}

/// Advection term `(u . grad) u` of one phase, evaluated in rotational form
/// `omega u^perp + grad(|u|^2 / 2)` (1D: `d_x(u^2 / 2)`).
pub fn advection_term(u: &VectorField, opts: StepOptions) -> VectorField {
    let grid = u.grid();
    if grid.dim() == 1 {
        let ux = u.component(0);
        let half_sq = product(ux, ux, opts).scaled(0.5);
        return VectorField::from_components(vec![partial(&half_sq, 0)]).expect("1D field");
    }
    let w = curl(u).expect("2D field");
    let (ux, uy) = (u.component(0), u.component(1));
    let kinetic = (&product(ux, ux, opts) + &product(uy, uy, opts)).scaled(0.5);
    let mut n = grad(&kinetic);
    n.components_mut()[0] -= &product(&w, uy, opts);
    n.components_mut()[1] += &product(&w, ux, opts);
    n
}

struct PhaseTerms {
    advection: VectorField,
    drho: ScalarField,
}

fn phase_terms(u: &MultiVelocity, rho: &MultiDensity, opts: StepOptions) -> Vec<PhaseTerms> {
    u.fields()
        .par_iter()
        .zip(rho.rho().par_iter())
        .map(|(ui, ri)| {
            let flux = ui.map_components(|c| product(c, ri, opts));
            PhaseTerms {
                advection: advection_term(ui, opts),
                drho: div(&flux).scaled(-1.0),
            }
        })
        .collect()
}

fn pressure_from_terms(
    u: &MultiVelocity,
    rho: &MultiDensity,
    terms: &[PhaseTerms],
    opts: StepOptions,
) -> Result<ScalarField> {
    let forcing: Vec<VectorField> = terms
        .par_iter()
        .zip(u.fields().par_iter())
        .zip(rho.rho().par_iter())
        .map(|((t, ui), ri)| {
            let mut f = t.advection.map_components(|c| product(c, ri, opts));
            f.axpy(-1.0, &ui.map_components(|c| product(c, &t.drho, opts)));
            f
        })
        .collect();
    let source = div(&weighted_sum_vector(rho.weights(), &forcing));
    solve_poisson(&source.scaled(-1.0))
}

/// Common pressure of all phases:
/// `-lap p = div sum_i w_i (rho_i (u_i . grad) u_i + div(rho_i u_i) u_i)`.
pub fn pressure_solve(u: &MultiVelocity, rho: &MultiDensity) -> Result<ScalarField> {
    pressure_solve_with(u, rho, StepOptions::default())
}

pub fn pressure_solve_with(u: &MultiVelocity, rho: &MultiDensity, opts: StepOptions) -> Result<ScalarField> {
    rho.check_compatible(u.quad(), u.grid())?;
    let terms = phase_terms(u, rho, opts);
    pressure_from_terms(u, rho, &terms, opts)
}

/// Time derivatives of the velocity-density form.
#[derive(Clone, Debug)]
pub struct Rhs {
    pub du: Vec<VectorField>,
    pub drho: Vec<ScalarField>,
    pub pressure: ScalarField,
}

pub(crate) fn rhs_unchecked(u: &MultiVelocity, rho: &MultiDensity, opts: StepOptions) -> Result<Rhs> {
    rho.check_compatible(u.quad(), u.grid())?;
    let terms = phase_terms(u, rho, opts);
    let pressure = pressure_from_terms(u, rho, &terms, opts)?;
    let dp = grad(&pressure);
    let (du, drho) = terms
        .into_iter()
        .map(|t| {
            let mut du = t.advection;
            du.axpy(1.0, &dp);
            du.scale(-1.0);
            (du, t.drho)
        })
        .unzip();
    Ok(Rhs { du, drho, pressure })
}

/// `du_i/dt = -(u_i . grad) u_i - grad p`, `d rho_i/dt = -div(rho_i u_i)`.
pub fn rhs_velocity(state: &FlowState) -> Result<Rhs> {
    rhs_velocity_with(state, StepOptions::default())
}

pub fn rhs_velocity_with(state: &FlowState, opts: StepOptions) -> Result<Rhs> {
    require_in_fiber(&state.u, &state.rho)?;
    rhs_unchecked(&state.u, &state.rho, opts)
}

/// Coset-form time derivatives: the Hamiltonian operator applied to the
/// differential of the kinetic energy.
pub fn rhs_coset(a: &MomentumCoset, rho: &MultiDensity) -> Result<(MomentumCoset, TangentDensity)> {
    let (_, dh) = energy_and_dh(a, rho)?;
    hamiltonian_operator(a, rho, &dh)
}

/// Agreement of the two formulations at a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Consistency {
    /// `max |normalize((du/dt)^flat) - da/dt|`.
    pub momentum: f64,
    /// `max |d rho/dt (velocity form) - d rho/dt (coset form)|`.
    pub density: f64,
}

pub fn consistency_residual(state: &FlowState) -> Result<Consistency> {
    let rhs = rhs_velocity(state)?;
    let a = normalize_coset(state.u.fields().to_vec(), &state.rho)?;
    let (da, xi) = rhs_coset(&a, &state.rho)?;
    let from_velocity = normalize_coset(rhs.du, &state.rho)?;
    let momentum = from_velocity
        .alpha()
        .iter()
        .zip(da.alpha())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).max_abs()));
    let density = rhs
        .drho
        .iter()
        .zip(xi.xi())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).max_abs()));
    Ok(Consistency { momentum, density })
}
