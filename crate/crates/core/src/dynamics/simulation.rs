use crate::error::{Error, Result};

use super::diagnostics::{diagnostics, DiagnosticsRow};
use super::integrator::{step_rk4_with, StepReport};
use super::kelvin::KelvinTracker;
use super::pushforward::FlowMapTracker;
use super::rhs::{rhs_unchecked, Rhs, StepOptions};
use super::state::FlowState;

/// Number of steps covering `[0, t_end]` and the step that divides it
/// evenly (`dt` itself whenever `t_end / dt` is an integer).
pub fn step_count(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidTimeStep(dt));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Validation {
            field: "T".into(),
            reason: format!("final time must be finite and non-negative, got {t_end}"),
        });
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    if steps == 0 {
        return Ok((0, dt));
    }
    Ok((steps, t_end / steps as f64))
}

/// Time-stepping driver. Reuses the right-hand side at the end of each
/// step as the first stage of the next and feeds optional passive trackers.
pub struct Simulation {
    state: FlowState,
    opts: StepOptions,
    rhs: Option<Rhs>,
    kelvin: Option<KelvinTracker>,
    flow_map: Option<FlowMapTracker>,
    reports: Vec<StepReport>,
}

impl Simulation {
    pub fn new(state: FlowState, opts: StepOptions) -> Self {
        Self {
            state,
            opts,
            rhs: None,
            kelvin: None,
            flow_map: None,
            reports: Vec::new(),
        }
    }

    /// Co-evolves passive vorticities (2D only).
    pub fn with_kelvin(mut self) -> Result<Self> {
        self.kelvin = Some(KelvinTracker::new(&self.state)?);
        Ok(self)
    }

    /// Tracks Lagrangian flow maps and Jacobians (1D only).
    pub fn with_flow_map(mut self) -> Result<Self> {
        self.flow_map = Some(FlowMapTracker::new(&self.state)?);
        Ok(self)
    }

    pub fn state(&self) -> &FlowState {
        &self.state
    }

    pub fn into_state(self) -> FlowState {
        self.state
    }

    pub fn options(&self) -> StepOptions {
        self.opts
    }

    pub fn reports(&self) -> &[StepReport] {
        &self.reports
    }

    pub fn kelvin(&self) -> Option<&KelvinTracker> {
        self.kelvin.as_ref()
    }

    pub fn flow_map(&self) -> Option<&FlowMapTracker> {
        self.flow_map.as_ref()
    }

    pub fn kelvin_errors(&self) -> Result<Option<Vec<f64>>> {
        self.kelvin.as_ref().map(|k| k.errors(&self.state.u)).transpose()
    }

    pub fn diagnostics(&self) -> Result<DiagnosticsRow> {
        let kelvin = self.kelvin_errors()?;
        diagnostics(&self.state, kelvin.as_deref())
    }

    pub fn step(&mut self, dt: f64) -> Result<StepReport> {
        let k1 = match self.rhs.take() {
            Some(k) => k,
            None => rhs_unchecked(&self.state.u, &self.state.rho, self.opts)?,
        };
        let detail = step_rk4_with(&self.state, dt, self.opts, Some(&k1))?;
        if let Some(k) = self.kelvin.as_mut() {
            k.advance(&self.state.u, &k1.du, &detail.state.u, &detail.rhs_end.du, dt);
        }
        if let Some(f) = self.flow_map.as_mut() {
            f.advance(&detail.stage_velocities, dt, detail.state.t)?;
        }
        self.state = detail.state;
        self.rhs = Some(detail.rhs_end);
        self.reports.push(detail.report);
        Ok(detail.report)
    }

    /// Steps to `t_end` with steps of (about) `dt`, calling `observe` after
    /// every step with the step index (1-based).
    pub fn run(&mut self, t_end: f64, dt: f64, mut observe: impl FnMut(&Self, usize) -> Result<()>) -> Result<()> {
        let (steps, dt) = step_count(t_end - self.state.t, dt)?;
        for k in 1..=steps {
            self.step(dt)?;
            observe(self, k)?;
        }
        Ok(())
    }
}
