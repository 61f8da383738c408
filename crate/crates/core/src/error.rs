use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator and its structure checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("derivative `{kind}` is not defined for {input}")]
    KindMismatch { kind: &'static str, input: String },

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("right-hand side is not solvable: mean {mean:e} exceeds tolerance {tolerance:e}")]
    Solvability { mean: f64, tolerance: f64 },

    #[error("weight field is not positive (minimum {min:e})")]
    NonPositiveWeight { min: f64 },

    #[error("iterative solve did not converge after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("multiphase velocity violates the divergence constraint (residual {residual:e}, tolerance {tolerance:e})")]
    ConstraintViolation { residual: f64, tolerance: f64 },

    #[error("coset is not in normal form (residual {residual:e}, tolerance {tolerance:e})")]
    NormalForm { residual: f64, tolerance: f64 },

    #[error("tangent density is invalid: {0}")]
    InvalidTangent(String),

    #[error("density of phase {phase} lost positivity at t = {t} (minimum {min:e})")]
    PositivityLoss { t: f64, phase: usize, min: f64 },

    #[error("CFL condition violated: dt * max|u| * N / (2 pi) = {number} > {limit}")]
    Cfl { number: f64, limit: f64 },

    #[error("time step must be positive, got {0}")]
    InvalidTimeStep(f64),

    #[error("finite-difference step {step:e} leaves the positive density cone (minimum {min:e})")]
    StepSize { step: f64, min: f64 },

    #[error("flow map of phase {phase} folded (non-monotone) at t = {t}")]
    Fold { phase: usize, t: f64 },

    #[error("unsupported dimension: {0}")]
    Dimension(String),

    #[error("config error: {0}")]
    Parse(String),

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::PositivityLoss { .. }
                | Error::Cfl { .. }
                | Error::StepSize { .. }
                | Error::Fold { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
