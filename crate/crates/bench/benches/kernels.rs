use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use multiflow::dynamics::{rhs_velocity, step_rk4};
use multiflow::spectral::{fft, solve_poisson, solve_weighted_poisson};
use multiflow_bench::{elliptic_problem, shear_state};

const SIZES: [usize; 2] = [64, 128];

fn fft_round_trip(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft_round_trip");
    for n in SIZES {
        let (f, _) = elliptic_problem(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| fft::forward(black_box(f)).inverse())
        });
    }
    group.finish();
}

fn poisson(c: &mut Criterion) {
    let mut group = c.benchmark_group("poisson");
    for n in SIZES {
        let (g, rho) = elliptic_problem(n);
        group.bench_with_input(BenchmarkId::new("unweighted", n), &g, |b, g| {
            b.iter(|| solve_poisson(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("weighted", n), &(rho, g), |b, (rho, g)| {
            b.iter(|| solve_weighted_poisson(black_box(rho), black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(20);
    for n in SIZES {
        let state = shear_state(n);
        group.bench_with_input(BenchmarkId::new("rhs", n), &state, |b, s| {
            b.iter(|| rhs_velocity(black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rk4_step", n), &state, |b, s| {
            b.iter(|| step_rk4(black_box(s), 1e-3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fft_round_trip, poisson, dynamics);
criterion_main!(benches);
