//! The Lie algebroid of multiphase velocities over multiphase densities and
//! its dual: anchor, projections, inertia, pairing, Poisson tensor,
//! Hamiltonian operator, energy and the bracket of sections.

mod anchor;
mod energy;
mod inertia;
mod poisson_tensor;
mod projection;
mod section;

pub use anchor::{anchor, anchor_dual, base_pairing};
pub use energy::{energy, energy_and_dh};
pub use inertia::{inertia, inertia_inverse, pairing};
pub use poisson_tensor::{
    cotangent_pairing, hamiltonian_operator, interior_differential, poisson_tensor, poisson_tensor_lie_form, two_form,
};
pub use projection::{project_constraint, project_exact};
pub use section::{bracket_sections, derivative_along, jacobi_residual, BracketValue, Section, DEFAULT_SECTION_STEP};

pub(crate) use anchor::require_constrained as require_in_fiber;
