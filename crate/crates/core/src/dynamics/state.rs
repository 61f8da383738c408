use crate::algebroid::project_constraint;
use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField};
use crate::state::{MultiDensity, MultiVelocity, Report, Validate};
use crate::tolerance;

use super::rhs::pressure_solve;

/// Snapshot of a multiphase flow: densities, constrained velocities and the
/// pressure that goes with them.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub rho: MultiDensity,
    pub u: MultiVelocity,
    pub p: ScalarField,
}

impl FlowState {
    /// State at `t = 0`; fails if `u` is not in the fiber over `rho`.
    pub fn new(rho: MultiDensity, u: MultiVelocity) -> Result<Self> {
        let residual = u.constraint_residual(&rho)?;
        if residual > tolerance::CONSTRAINT {
            return Err(Error::ConstraintViolation {
                residual,
                tolerance: tolerance::CONSTRAINT,
            });
        }
        let p = pressure_solve(&u, &rho)?;
        Ok(Self { t: 0.0, rho, u, p })
    }

    /// Projects the raw velocity tuple onto the fiber first.
    pub fn projected(rho: MultiDensity, raw: Vec<crate::spectral::VectorField>) -> Result<Self> {
        let u = project_constraint(raw, &rho)?;
        Self::new(rho, u)
    }

    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    pub fn phases(&self) -> usize {
        self.rho.phases()
    }

    /// `1/2 sum_i w_i int |u_i|^2 rho_i`.
    pub fn energy(&self) -> f64 {
        0.5 * self.u.norm_sq(&self.rho).expect("state fields are compatible")
    }

    pub fn constraint_residual(&self) -> f64 {
        self.u
            .constraint_residual(&self.rho)
            .expect("state fields are compatible")
    }
}

impl Validate for FlowState {
    fn validate(&self) -> Result<Report> {
        let mut r = Report::new("flow state");
        r.extend(self.rho.validate()?);
        r.extend((&self.u, &self.rho).validate()?);
        Ok(r)
    }
}
