//! Multiphase and generalized incompressible Euler flows on the periodic torus:
//! pseudo-spectral fields, multiphase states, the algebroid structure behind
//! the equations, a constraint-preserving RK4 solver and scenario I/O.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebroid;
pub mod dynamics;
pub mod error;
pub mod sampling;
pub mod scenario;
pub mod spectral;
pub mod state;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
