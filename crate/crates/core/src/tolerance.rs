//! Tolerances shared by the validators, solvers and checks.

/// Pointwise weighted density sum, `|sum_i w_i rho_i - 1|`.
pub const DENSITY_SUM: f64 = 1e-10;
/// Phase masses, `|int rho_i - c_i|`.
pub const MASS: f64 = 1e-10;
/// Quadrature mass balance, `|sum_i w_i c_i - (2 pi)^d|`.
pub const QUADRATURE_MASS: f64 = 1e-10;
/// L2 residual of the multiphase divergence constraint (and of the co-closed normal form).
pub const CONSTRAINT: f64 = 1e-8;
/// Relative residual of the weighted elliptic solve.
pub const WEIGHTED_SOLVE: f64 = 1e-10;
/// Relative mean of a Poisson right-hand side.
pub const SOLVABILITY: f64 = 1e-10;
/// Normal-form residuals of function-tuple cosets.
pub const FUNCTION_COSET: f64 = 1e-10;
/// Tangent conditions on density variations (zero weighted sum, zero mass change).
pub const TANGENT: f64 = 1e-10;
/// CFL number bound for the explicit integrator.
pub const CFL: f64 = 0.5;
