use crate::error::Result;
use crate::spectral::curl;

use super::state::FlowState;

/// Observables of one snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// Kinetic energy `1/2 sum_i w_i int |u_i|^2 rho_i`.
    pub energy: f64,
    pub masses: Vec<f64>,
    /// `max |sum_i w_i rho_i - 1|`.
    pub constraint_inf: f64,
    /// `|| div(sum_i w_i rho_i u_i) ||_2`.
    pub divergence_l2: f64,
    /// Vorticity transport mismatch per phase (zeros when not tracked).
    pub kelvin: Vec<f64>,
    /// `|| curl u_i ||_2` per phase (zeros in 1D).
    pub enstrophy: Vec<f64>,
}

impl DiagnosticsRow {
    pub fn is_finite(&self) -> bool {
        [self.t, self.energy, self.constraint_inf, self.divergence_l2]
            .iter()
            .chain(&self.masses)
            .chain(&self.kelvin)
            .chain(&self.enstrophy)
            .all(|v| v.is_finite())
    }
}

pub fn diagnostics(state: &FlowState, kelvin: Option<&[f64]>) -> Result<DiagnosticsRow> {
    let n = state.phases();
    let enstrophy = if state.grid().dim() == 2 {
        state
            .u
            .fields()
            .iter()
            .map(|u| curl(u).map(|w| w.l2_norm()))
            .collect::<Result<_>>()?
    } else {
        vec![0.0; n]
    };
    Ok(DiagnosticsRow {
        t: state.t,
        energy: state.energy(),
        masses: state.rho.current_masses(),
        constraint_inf: state.rho.constraint_inf(),
        divergence_l2: state.constraint_residual(),
        kelvin: kelvin.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; n]),
        enstrophy,
    })
}
