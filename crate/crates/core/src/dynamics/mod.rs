//! Time evolution of multiphase flows: right-hand sides in velocity and
//! coset form, the pressure solve, RK4 stepping, and structure checks
//! (vorticity transport, flow-map pushforward, induced metric).

mod diagnostics;
mod integrator;
mod kelvin;
mod metric;
mod pushforward;
mod rhs;
mod simulation;
mod state;

pub use diagnostics::{diagnostics, DiagnosticsRow};
pub use integrator::{cfl_number, step_rk4, step_rk4_with, StepDetail, StepReport};
pub use kelvin::{kelvin_check, kelvin_check_with, KelvinReport, KelvinTracker};
pub use metric::mdens_metric;
pub use pushforward::{
    pushforward_check_1d, pushforward_check_1d_with, FlowMapTracker, Interpolant, PushforwardReport,
};
pub use rhs::{
    advection_term, consistency_residual, pressure_solve, pressure_solve_with, rhs_coset, rhs_velocity,
    rhs_velocity_with, Consistency, Rhs, StepOptions,
};
pub use simulation::{step_count, Simulation};
pub use state::FlowState;
