use std::f64::consts::PI;

use crate::algebroid::project_constraint;
use crate::error::{Error, Result};
use crate::spectral::{ScalarField, VectorField};
use crate::state::{MultiDensity, MultiVelocity};
use crate::tolerance;

use super::rhs::{rhs_unchecked, Rhs, StepOptions};
use super::state::FlowState;

/// Constraint bookkeeping of one completed step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    /// Time at the end of the step.
    pub t: f64,
    /// `max |sum_i w_i rho_i - 1|` before renormalization.
    pub constraint_drift: f64,
    /// `|| div(sum_i w_i rho_i u_i) ||_2` after re-projection.
    pub divergence_residual: f64,
    pub min_density: f64,
}

/// Everything a step produces, including the stage velocities (needed by
/// passive tracers that ride along with the solver) and the right-hand side
/// at the new state.
#[derive(Clone, Debug)]
pub struct StepDetail {
    pub state: FlowState,
    pub report: StepReport,
    pub stage_velocities: [MultiVelocity; 4],
    pub rhs_end: Rhs,
}

/// `dt * max|u| * N / (2 pi)`.
pub fn cfl_number(u: &MultiVelocity, dt: f64) -> f64 {
    dt * u.max_abs() * u.grid().n() as f64 / (2.0 * PI)
}

fn shifted_scalar(base: &[ScalarField], incs: &[(&[ScalarField], f64)]) -> Vec<ScalarField> {
    base.iter()
        .enumerate()
        .map(|(i, b)| {
            let mut out = b.clone();
            for (k, c) in incs {
                out.axpy(*c, &k[i]);
            }
            out
        })
        .collect()
}

fn shifted_vector(base: &[VectorField], incs: &[(&[VectorField], f64)]) -> Vec<VectorField> {
    base.iter()
        .enumerate()
        .map(|(i, b)| {
            let mut out = b.clone();
            for (k, c) in incs {
                out.axpy(*c, &k[i]);
            }
            out
        })
        .collect()
}

/// Classical RK4 step with the default options.
pub fn step_rk4(state: &FlowState, dt: f64) -> Result<FlowState> {
    step_rk4_with(state, dt, StepOptions::default(), None).map(|d| d.state)
}

/// Classical RK4 step of the velocity-density form, followed by
/// renormalization of the densities, re-projection of the velocities and a
/// positivity check. `k1` may carry the right-hand side at `state` from the
/// previous step.
pub fn step_rk4_with(state: &FlowState, dt: f64, opts: StepOptions, k1: Option<&Rhs>) -> Result<StepDetail> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidTimeStep(dt));
    }
    let cfl = cfl_number(&state.u, dt);
    if cfl > tolerance::CFL {
        return Err(Error::Cfl {
            number: cfl,
            limit: tolerance::CFL,
        });
    }
    let (u0, r0) = (state.u.fields(), state.rho.rho());
    let stage = |k: &Rhs, c: f64| -> Result<(MultiVelocity, MultiDensity)> {
        let u = state.u.with_fields(shifted_vector(u0, &[(&k.du, c * dt)]))?;
        let r = state.rho.with_fields(shifted_scalar(r0, &[(&k.drho, c * dt)]))?;
        Ok((u, r))
    };

    let k1 = match k1 {
        Some(k) => k.clone(),
        None => rhs_unchecked(&state.u, &state.rho, opts)?,
    };
    let (u2, r2) = stage(&k1, 0.5)?;
    let k2 = rhs_unchecked(&u2, &r2, opts)?;
    let (u3, r3) = stage(&k2, 0.5)?;
    let k3 = rhs_unchecked(&u3, &r3, opts)?;
    let (u4, r4) = stage(&k3, 1.0)?;
    let k4 = rhs_unchecked(&u4, &r4, opts)?;

    let b = [dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0];
    let u_new = shifted_vector(u0, &[(&k1.du, b[0]), (&k2.du, b[1]), (&k3.du, b[2]), (&k4.du, b[3])]);
    let r_new = state.rho.with_fields(shifted_scalar(
        r0,
        &[(&k1.drho, b[0]), (&k2.drho, b[1]), (&k3.drho, b[2]), (&k4.drho, b[3])],
    ))?;

    let t = state.t + dt;
    let constraint_drift = r_new.constraint_inf();
    let rho = r_new.renormalized();
    let u = project_constraint(u_new, &rho)?;
    let divergence_residual = u.constraint_residual(&rho)?;

    let mut min_density = f64::INFINITY;
    for (phase, m) in rho.minima().into_iter().enumerate() {
        if !(m > 0.0) {
            return Err(Error::PositivityLoss { t, phase, min: m });
        }
        min_density = min_density.min(m);
    }
    if !u.max_abs().is_finite() {
        return Err(Error::PositivityLoss {
            t,
            phase: 0,
            min: f64::NAN,
        });
    }

    let rhs_end = rhs_unchecked(&u, &rho, opts)?;
    let next = FlowState {
        t,
        rho,
        u,
        p: rhs_end.pressure.clone(),
    };
    Ok(StepDetail {
        state: next,
        report: StepReport {
            t,
            constraint_drift,
            divergence_residual,
            min_density,
        },
        stage_velocities: [state.u.clone(), u2, u3, u4],
        rhs_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::state::WeightMode;

    #[test]
    fn zero_velocity_is_a_fixed_point() {
        let g = Grid::new(2, 16).unwrap();
        let rho = MultiDensity::from_mode(
            WeightMode::Unit,
            vec![
                ScalarField::from_fn(g, |[x, y]| 0.5 + 0.2 * x.sin() * y.cos()),
                ScalarField::from_fn(g, |[x, y]| 0.5 - 0.2 * x.sin() * y.cos()),
            ],
        )
        .unwrap();
        let s = FlowState::new(rho.clone(), MultiVelocity::zeros(rho.quad().clone(), g)).unwrap();
        let next = step_rk4(&s, 0.1).unwrap();
        assert_eq!(next.u.max_abs(), 0.0);
        for (a, b) in next.rho.rho().iter().zip(s.rho.rho()) {
            assert!((a - b).max_abs() < 1e-15);
        }
        assert!((next.t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn taylor_green_drift_is_tiny() {
        let g = Grid::new(2, 32).unwrap();
        let rho = MultiDensity::from_mode(WeightMode::Unit, vec![ScalarField::constant(g, 1.0)]).unwrap();
        let u = VectorField::from_fn(g, |[x, y]| [x.sin() * y.cos(), -x.cos() * y.sin()]);
        let s0 = FlowState::new(rho.clone(), MultiVelocity::new(rho.quad().clone(), vec![u]).unwrap()).unwrap();
        let mut s = s0.clone();
        for _ in 0..50 {
            s = step_rk4(&s, 0.01).unwrap();
        }
        assert!((s.u.phase(0) - s0.u.phase(0)).max_abs() < 1e-10);
    }

    #[test]
    fn cfl_guard_and_bad_steps() {
        let g = Grid::new(1, 64).unwrap();
        let rho = MultiDensity::from_mode(WeightMode::Unit, vec![ScalarField::constant(g, 1.0)]).unwrap();
        let u = MultiVelocity::new(rho.quad().clone(), vec![VectorField::from_fn(g, |_| [5.0, 0.0])]).unwrap();
        let s = FlowState::new(rho, u).unwrap();
        assert!(matches!(step_rk4(&s, 0.1), Err(Error::Cfl { .. })));
        assert!(matches!(step_rk4(&s, -0.1), Err(Error::InvalidTimeStep(_))));
        assert!(step_rk4(&s, 0.005).is_ok());
    }
}
