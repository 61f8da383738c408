use proptest::prelude::*;

use multiflow::algebroid::{anchor, inertia, inertia_inverse, pairing};
use multiflow::dynamics::{diagnostics, step_rk4, FlowState};
use multiflow::sampling::Sampler;
use multiflow::scenario::{csv_row, decode_snapshot, encode_snapshot};
use multiflow::spectral::{integrate, Grid};
use multiflow::state::{Validate, WeightMode};

fn mode_and_phases() -> impl Strategy<Value = (WeightMode, usize)> {
    prop_oneof![
        (1usize..=3).prop_map(|n| (WeightMode::Unit, n)),
        (2usize..=5).prop_map(|n| (WeightMode::Trapezoid, n)),
    ]
}

fn sampled_state(dim: usize, seed: u64, mode: WeightMode, phases: usize, contrast: f64) -> FlowState {
    let grid = Grid::new(dim, 16).unwrap();
    let mut s = Sampler::new(grid, seed);
    let mut state = s.state(mode, phases, contrast).unwrap();
    // keep the step well inside the stability limit
    let scale = 0.5 / state.u.max_abs().max(1.0);
    state = FlowState::new(state.rho.clone(), state.u.scaled(scale)).unwrap();
    state
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_step_keeps_masses_and_constraints(
        seed in any::<u64>(),
        dim in 1usize..=2,
        (mode, phases) in mode_and_phases(),
        contrast in 0.05f64..0.5,
    ) {
        let s0 = sampled_state(dim, seed, mode, phases, contrast);
        let s1 = step_rk4(&s0, 1e-2).unwrap();
        let report = s1.validate().unwrap();
        prop_assert!(report.passed(), "{}", report);
        for (a, b) in s1.rho.current_masses().iter().zip(s0.rho.quad().masses()) {
            prop_assert!((a - b).abs() <= 1e-11);
        }
        prop_assert!((s1.energy() - s0.energy()).abs() <= 1e-8 * s0.energy().max(1.0));
    }

    #[test]
    fn snapshots_round_trip_bit_for_bit(
        seed in any::<u64>(),
        dim in 1usize..=2,
        (mode, phases) in mode_and_phases(),
    ) {
        let s = sampled_state(dim, seed, mode, phases, 0.3);
        let back = decode_snapshot(&encode_snapshot(&s)).unwrap();
        prop_assert_eq!(&back.rho, &s.rho);
        prop_assert_eq!(&back.u, &s.u);
        prop_assert_eq!(encode_snapshot(&back), encode_snapshot(&s));
    }

    #[test]
    fn csv_rows_are_lossless(seed in any::<u64>(), (mode, phases) in mode_and_phases()) {
        let s = sampled_state(2, seed, mode, phases, 0.3);
        let row = diagnostics(&s, None).unwrap();
        let parsed: Vec<f64> = csv_row(&row).split(',').map(|v| v.parse().unwrap()).collect();
        prop_assert_eq!(parsed[1].to_bits(), row.energy.to_bits());
        for (p, m) in parsed[2..].iter().zip(&row.masses) {
            prop_assert_eq!(p.to_bits(), m.to_bits());
        }
    }

    #[test]
    fn inertia_is_an_isometry_onto_normal_forms(
        seed in any::<u64>(),
        (mode, phases) in mode_and_phases(),
    ) {
        let grid = Grid::new(2, 16).unwrap();
        let mut s = Sampler::new(grid, seed);
        let rho = s.density(mode, phases, 0.4).unwrap();
        let (u, v) = (s.velocity(&rho).unwrap(), s.velocity(&rho).unwrap());
        let a = inertia(&u, &rho).unwrap();
        let back = inertia_inverse(&a, &rho).unwrap();
        prop_assert!((back.inner(&v, &rho).unwrap() - u.inner(&v, &rho).unwrap()).abs() <= 1e-9);
        prop_assert!((pairing(&a, &v, &rho).unwrap() - u.inner(&v, &rho).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn anchor_images_are_tangent(seed in any::<u64>(), dim in 1usize..=2, (mode, phases) in mode_and_phases()) {
        let grid = Grid::new(dim, 16).unwrap();
        let mut s = Sampler::new(grid, seed);
        let rho = s.density(mode, phases, 0.4).unwrap();
        let xi = anchor(&s.velocity(&rho).unwrap(), &rho).unwrap();
        prop_assert!(xi.validate().unwrap().passed());
        for x in xi.xi() {
            prop_assert!(integrate(x).abs() <= 1e-10);
        }
    }
}
