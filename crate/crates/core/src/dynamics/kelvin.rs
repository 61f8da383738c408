use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{curl, div, ScalarField, VectorField};
use crate::state::MultiVelocity;

use super::simulation::{step_count, Simulation};
use super::state::FlowState;
use super::StepOptions;

/// Passive vorticity 2-forms carried along by each phase's velocity,
/// `d omega_i/dt = -div(omega_i u_i)`, for comparison with `curl u_i`.
///
/// The carrier velocity inside a step is the cubic Hermite interpolant of
/// the solver's velocities and accelerations at both ends of the step, so
/// the passive solve is independent of the solver's own stages.
#[derive(Clone, Debug)]
pub struct KelvinTracker {
    omega: Vec<ScalarField>,
    reference: Vec<f64>,
}

fn transport(omega: &ScalarField, u: &VectorField) -> ScalarField {
    div(&u.mul_scalar(omega)).scaled(-1.0)
}

fn vorticities(u: &MultiVelocity) -> Result<Vec<ScalarField>> {
    u.fields().iter().map(curl).collect()
}

impl KelvinTracker {
    pub fn new(state: &FlowState) -> Result<Self> {
        if state.grid().dim() != 2 {
            return Err(Error::Dimension(
                "vorticity transport is vacuous in 1D (the curl vanishes identically)".into(),
            ));
        }
        let omega = vorticities(&state.u)?;
        let reference = omega.iter().map(ScalarField::l2_norm).collect();
        Ok(Self { omega, reference })
    }

    /// Advances the passive vorticities over one step of length `dt`, given
    /// velocities `u0`, `u1` and accelerations `a0`, `a1` at its ends.
    pub fn advance(&mut self, u0: &MultiVelocity, a0: &[VectorField], u1: &MultiVelocity, a1: &[VectorField], dt: f64) {
        self.omega = self
            .omega
            .par_iter()
            .enumerate()
            .map(|(i, w)| {
                let (v0, v1) = (u0.phase(i), u1.phase(i));
                // Hermite basis at the midpoint: 1/2, dt/8, 1/2, -dt/8
                let mut vh = v0.scaled(0.5);
                vh.axpy(0.5, v1);
                vh.axpy(dt / 8.0, &a0[i]);
                vh.axpy(-dt / 8.0, &a1[i]);

                let k1 = transport(w, v0);
                let mut s = w.clone();
                s.axpy(0.5 * dt, &k1);
                let k2 = transport(&s, &vh);
                let mut s = w.clone();
                s.axpy(0.5 * dt, &k2);
                let k3 = transport(&s, &vh);
                let mut s = w.clone();
                s.axpy(dt, &k3);
                let k4 = transport(&s, v1);

                let mut out = w.clone();
                out.axpy(dt / 6.0, &k1);
                out.axpy(dt / 3.0, &k2);
                out.axpy(dt / 3.0, &k3);
                out.axpy(dt / 6.0, &k4);
                out
            })
            .collect();
    }

    pub fn omega(&self) -> &[ScalarField] {
        &self.omega
    }

    /// `||omega_i - curl u_i||_2 / ||curl u_i(0)||_2` per phase (absolute
    /// when the initial vorticity vanishes).
    pub fn errors(&self, u: &MultiVelocity) -> Result<Vec<f64>> {
        let current = vorticities(u)?;
        Ok(self
            .omega
            .iter()
            .zip(&current)
            .zip(&self.reference)
            .map(|((w, c), r)| {
                let e = (w - c).l2_norm();
                if *r < 1e-14 {
                    e
                } else {
                    e / r
                }
            })
            .collect())
    }
}

/// Result of a vorticity transport run.
#[derive(Clone, Debug, PartialEq)]
pub struct KelvinReport {
    /// Per-phase relative mismatch at the final time.
    pub errors: Vec<f64>,
    /// Per-phase `max_t ||curl u_i(t)||_2`.
    pub max_vorticity: Vec<f64>,
    pub steps: usize,
}

/// Runs the solver from `initial` to `t_end` while co-evolving passive
/// vorticities, and reports their mismatch with `curl u`.
pub fn kelvin_check(initial: &FlowState, t_end: f64, dt: f64) -> Result<KelvinReport> {
    kelvin_check_with(initial, t_end, dt, StepOptions::default())
}

pub fn kelvin_check_with(initial: &FlowState, t_end: f64, dt: f64, opts: StepOptions) -> Result<KelvinReport> {
    let (steps, dt) = step_count(t_end, dt)?;
    let mut sim = Simulation::new(initial.clone(), opts).with_kelvin()?;
    let mut max_vorticity: Vec<f64> = vorticities(&initial.u)?.iter().map(ScalarField::l2_norm).collect();
    for _ in 0..steps {
        sim.step(dt)?;
        for (m, w) in max_vorticity.iter_mut().zip(vorticities(&sim.state().u)?) {
            *m = m.max(w.l2_norm());
        }
    }
    Ok(KelvinReport {
        errors: sim.kelvin_errors()?.expect("tracker enabled"),
        max_vorticity,
        steps,
    })
}
