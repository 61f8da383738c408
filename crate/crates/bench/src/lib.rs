//! Fixtures shared by the kernel benchmarks in `benches/`.

use multiflow::dynamics::FlowState;
use multiflow::scenario::{build_scenario, ScenarioConfig, ScenarioKind};
use multiflow::spectral::{Grid, ScalarField};

/// Two-phase shear layer on an `n x n` grid.
pub fn shear_state(n: usize) -> FlowState {
    build_scenario(&ScenarioConfig::preset(ScenarioKind::TwoPhaseShear, n)).expect("preset is valid")
}

/// Mean-zero smooth right-hand side and a weight bounded below by 0.1.
pub fn elliptic_problem(n: usize) -> (ScalarField, ScalarField) {
    let g = Grid::new(2, n).expect("valid grid");
    let rhs = ScalarField::from_fn(g, |[x, y]| x.sin() * (2.0 * y).cos() + 0.3 * (3.0 * x + y).cos());
    let rho = ScalarField::from_fn(g, |[x, y]| 0.55 + 0.45 * x.sin() * y.cos());
    (rhs, rho)
}
