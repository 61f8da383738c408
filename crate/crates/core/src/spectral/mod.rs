//! Fields on the flat periodic torus and their Fourier calculus.

pub mod fft;
mod field;
mod grid;
pub mod ops;
pub mod poisson;

pub use field::{ScalarField, VectorField};
pub use grid::Grid;
pub use ops::{
    advect, curl, dealias, directional, div, grad, integrate, lap, lie_bracket, partial, spectral_derivative,
    DerivativeKind, Field,
};
pub use poisson::{solve_poisson, solve_weighted_poisson, solve_weighted_poisson_with, SolverSettings};
