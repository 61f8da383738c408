use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::fft;
use crate::spectral::ops::{self, laplace_symbol};
use crate::spectral::ScalarField;
use crate::tolerance;

fn check_solvable(g: &ScalarField) -> Result<()> {
    let integral = ops::integrate(g);
    let allowed = tolerance::SOLVABILITY * g.l2_norm();
    if integral.abs() > allowed || !integral.is_finite() {
        let vol = g.grid().volume();
        return Err(Error::Solvability {
            mean: integral / vol,
            tolerance: allowed / vol,
        });
    }
    Ok(())
}

/// Divides by `-|k|^2`, dropping the modes whose symbol vanishes (the mean
/// and the pure Nyquist modes).
fn inverse_laplacian(g: &ScalarField) -> ScalarField {
    let n = g.grid().n();
    let mut s = fft::forward(g);
    s.apply(|i, j| {
        let k2 = laplace_symbol(i, j, n);
        if k2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-1.0 / k2, 0.0)
        }
    });
    s.inverse()
}

/// Part of `g` that lies in the range of the discrete Laplacian.
pub fn reachable_part(g: &ScalarField) -> ScalarField {
    let n = g.grid().n();
    let mut s = fft::forward(g);
    s.apply(|i, j| {
        if laplace_symbol(i, j, n) == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    s.inverse()
}

/// Mean-zero `f` with `lap f = g`.
pub fn solve_poisson(g: &ScalarField) -> Result<ScalarField> {
    check_solvable(g)?;
    Ok(inverse_laplacian(g))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    /// Target for the relative residual `||div(rho grad f) - g|| / ||g||`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: tolerance::WEIGHTED_SOLVE,
            max_iterations: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedSolution {
    pub solution: ScalarField,
    pub iterations: usize,
    /// Relative residual of the returned solution, recomputed from scratch.
    pub residual: f64,
}

fn weighted_operator(rho: &ScalarField, f: &ScalarField) -> ScalarField {
    ops::div(&ops::grad(f).mul_scalar(rho))
}

fn dot(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()
}

/// Mean-zero `f` with `div(rho grad f) = g`.
pub fn solve_weighted_poisson(rho: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    solve_weighted_poisson_with(rho, g, &SolverSettings::default()).map(|s| s.solution)
}

/// Preconditioned conjugate gradients on `-div(rho grad .)`, preconditioned
/// by the inverse of `-lap`.
pub fn solve_weighted_poisson_with(
    rho: &ScalarField,
    g: &ScalarField,
    settings: &SolverSettings,
) -> Result<WeightedSolution> {
    if rho.grid() != g.grid() {
        return Err(Error::GridMismatch("weight and right-hand side differ".into()));
    }
    let min = rho.min();
    if !(min > 0.0) {
        return Err(Error::NonPositiveWeight { min });
    }
    check_solvable(g)?;

    let grid = g.grid();
    let target = reachable_part(g);
    let g_norm = g.l2_norm();
    if target.l2_norm() == 0.0 {
        return Ok(WeightedSolution {
            solution: ScalarField::zeros(grid),
            iterations: 0,
            residual: 0.0,
        });
    }
    // Work with b = -g so the operator is positive definite.
    let b = target.scaled(-1.0);
    let b_dot = dot(&b, &b).sqrt();
    let inner_tol = (settings.tolerance * 1e-2).max(1e-15);

    let mut x = ScalarField::zeros(grid);
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < settings.max_iterations {
        // (re)start from the true residual
        let mut r = &b + &weighted_operator(rho, &x);
        let mut z = inverse_laplacian(&r).scaled(-1.0);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        while iterations < settings.max_iterations {
            if dot(&r, &r).sqrt() <= inner_tol * b_dot {
                break;
            }
            let ap = weighted_operator(rho, &p).scaled(-1.0);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                break;
            }
            let alpha = rz / pap;
            x.axpy(alpha, &p);
            r.axpy(-alpha, &ap);
            iterations += 1;
            z = inverse_laplacian(&r).scaled(-1.0);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p = p.scaled(beta);
            p += &z;
        }
        let true_residual = &weighted_operator(rho, &x) - &target;
        residual = true_residual.l2_norm() / g_norm;
        if residual <= settings.tolerance {
            let mean = x.mean();
            let solution = x.map(|v| v - mean);
            return Ok(WeightedSolution {
                solution,
                iterations,
                residual,
            });
        }
        if !residual.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence { iterations, residual })
}
