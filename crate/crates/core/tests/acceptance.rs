//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rustfft::FftPlanner;

use multiflow::algebroid::{anchor, project_constraint};
use multiflow::dynamics::{
    consistency_residual, kelvin_check, mdens_metric, pushforward_check_1d, FlowState, Simulation, StepOptions,
};
use multiflow::sampling::Sampler;
use multiflow::scenario::{build_scenario, ScenarioConfig, ScenarioKind};
use multiflow::spectral::{
    grad, solve_poisson, solve_weighted_poisson_with, Grid, ScalarField, SolverSettings, VectorField,
};
use multiflow::state::{MultiDensity, WeightMode};
use multiflow::verify::{leibniz_study, observed_orders, poisson_structure_suite};
use multiflow::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Constraint bookkeeping collected from every time integration of the suite.
#[derive(Default)]
struct Ledger {
    max_drift: f64,
    max_divergence: f64,
    steps: usize,
    /// Final mass error of each built-in scenario that has been run to T = 1.
    masses: Vec<(ScenarioKind, f64)>,
}

impl Ledger {
    fn run(&mut self, state: FlowState, t_end: f64, dt: f64) -> Result<FlowState> {
        let mut sim = Simulation::new(state, StepOptions::default());
        sim.run(t_end, dt, |_, _| Ok(()))?;
        for r in sim.reports() {
            self.max_drift = self.max_drift.max(r.constraint_drift);
            self.max_divergence = self.max_divergence.max(r.divergence_residual);
        }
        self.steps += sim.reports().len();
        Ok(sim.into_state())
    }

    fn record_masses(&mut self, kind: ScenarioKind, state: &FlowState) {
        let err = state
            .rho
            .current_masses()
            .iter()
            .zip(state.rho.quad().masses())
            .fold(0.0_f64, |m, (a, c)| m.max((a - c).abs()));
        self.masses.push((kind, err));
    }
}

fn sci(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn scenario(kind: ScenarioKind, n: usize) -> Result<FlowState> {
    build_scenario(&ScenarioConfig::preset(kind, n))
}

fn max_diff(a: &[VectorField], b: &[VectorField]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).max_abs()))
}

fn stationarity(ledger: &mut Ledger) -> Result<Outcome> {
    let s0 = scenario(ScenarioKind::TaylorGreen, 64)?;
    let clock = Instant::now();
    let s1 = ledger.run(s0.clone(), 1.0, 1e-3)?;
    let secs = clock.elapsed().as_secs_f64();
    ledger.record_masses(ScenarioKind::TaylorGreen, &s1);
    let drift = max_diff(s1.u.fields(), s0.u.fields());
    Ok(Outcome::new(
        drift <= 1e-6 && secs <= 60.0,
        format!("max|u(T)-u(0)| = {drift:.3e}, runtime {secs:.1} s"),
    ))
}

fn energy_conservation(ledger: &mut Ledger) -> Result<Outcome> {
    let s0 = scenario(ScenarioKind::TwoPhaseShear, 64)?;
    let h0 = s0.energy();
    let coarse = ledger.run(s0.clone(), 1.0, 1e-3)?;
    let fine = ledger.run(s0, 1.0, 5e-4)?;
    ledger.record_masses(ScenarioKind::TwoPhaseShear, &fine);
    let (ec, ef) = ((coarse.energy() - h0).abs(), (fine.energy() - h0).abs());
    let ratio = ec / ef;
    Ok(Outcome::new(
        (ratio - 16.0).abs() <= 0.25 * 16.0 && ef <= 1e-6,
        format!(
            "relative drift {:.3e} (dt 1e-3), {:.3e} (dt 5e-4), ratio {ratio:.2}, absolute {ef:.3e}",
            ec / h0,
            ef / h0
        ),
    ))
}

fn mass_conservation(ledger: &mut Ledger) -> Result<Outcome> {
    for kind in [
        ScenarioKind::EqualVelocity,
        ScenarioKind::OneDTwoPhase,
        ScenarioKind::Continuum,
        ScenarioKind::Potential,
    ] {
        let n = if kind.default_dim() == 1 { 128 } else { 32 };
        let s = ledger.run(scenario(kind, n)?, 1.0, 1e-3)?;
        ledger.record_masses(kind, &s);
    }
    let worst = ledger.masses.iter().fold(0.0_f64, |m, (_, e)| m.max(*e));
    let detail = ledger
        .masses
        .iter()
        .map(|(k, e)| format!("{k} {e:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome::new(
        worst <= 1e-11 && ledger.masses.len() == ScenarioKind::ALL.len(),
        detail,
    ))
}

fn constraint_maintenance(ledger: &mut Ledger) -> Result<Outcome> {
    Ok(Outcome::new(
        ledger.max_drift <= 1e-10 && ledger.max_divergence <= 1e-8,
        format!(
            "over {} steps: density-sum drift {:.3e}, divergence {:.3e}",
            ledger.steps, ledger.max_drift, ledger.max_divergence
        ),
    ))
}

fn hamiltonian_consistency(_: &mut Ledger) -> Result<Outcome> {
    let grid = Grid::new(2, 32)?;
    let mut worst = 0.0_f64;
    for (k, (mode, phases)) in [
        (WeightMode::Unit, 1),
        (WeightMode::Unit, 2),
        (WeightMode::Unit, 4),
        (WeightMode::Trapezoid, 8),
    ]
    .into_iter()
    .enumerate()
    {
        let mut s = Sampler::new(grid, 100 + k as u64);
        for _ in 0..20 {
            let c = consistency_residual(&s.state(mode, phases, 0.4)?)?;
            worst = worst.max(c.momentum).max(c.density);
        }
    }
    Ok(Outcome::new(
        worst <= 1e-8,
        format!("worst residual {worst:.3e} over 80 states"),
    ))
}

fn kelvin_transport(_: &mut Ledger) -> Result<Outcome> {
    let shear = scenario(ScenarioKind::TwoPhaseShear, 64)?;
    let coarse = kelvin_check(&shear, 1.0, 1e-2)?;
    let fine = kelvin_check(&shear, 1.0, 5e-3)?;
    let ratios: Vec<f64> = coarse.errors.iter().zip(&fine.errors).map(|(a, b)| a / b).collect();
    let potential = kelvin_check(&scenario(ScenarioKind::Potential, 32)?, 1.0, 1e-3)?;
    let curl = potential.max_vorticity.iter().fold(0.0_f64, |m, v| m.max(*v));
    Ok(Outcome::new(
        ratios.iter().all(|r| (12.0..=20.0).contains(r)) && curl <= 1e-8,
        format!("error ratios {ratios:.2?}, potential max ||curl u|| {curl:.3e}"),
    ))
}

fn poisson_algebra(_: &mut Ledger) -> Result<Outcome> {
    let grid = Grid::new(2, 64)?;
    let (mut anti, mut bil, mut lie, mut dual) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut cases = 0;
    for (mode, phases) in [(WeightMode::Unit, 1), (WeightMode::Unit, 2), (WeightMode::Trapezoid, 4)] {
        let r = poisson_structure_suite(grid, mode, phases, 50, 7)?;
        cases += r.cases;
        anti = anti.max(r.antisymmetry);
        bil = bil.max(r.bilinearity);
        lie = lie.max(r.lie_form);
        dual = dual.max(r.duality);
    }
    Ok(Outcome::new(
        anti <= 1e-12 && bil <= 1e-12 && lie <= 1e-10 && dual <= 1e-10,
        format!(
            "{cases} cases: antisymmetry {anti:.1e}, bilinearity {bil:.1e}, two forms {lie:.1e}, duality {dual:.1e}"
        ),
    ))
}

fn leibniz_rule(_: &mut Ledger) -> Result<Outcome> {
    let steps = [1e-3, 5e-4, 2.5e-4];
    let pts = leibniz_study(Grid::new(2, 64)?, 2, &steps, 7)?;
    let residuals: Vec<f64> = pts.iter().map(|p| p.residual).collect();
    let orders = observed_orders(&residuals);
    let constraint_ok = pts
        .iter()
        .all(|p| p.constraint_residual <= 10.0 * p.step * p.step + 1e-8);
    let worst = pts.iter().fold(0.0_f64, |m, p| m.max(p.constraint_residual));
    Ok(Outcome::new(
        orders.iter().all(|o| *o >= 0.9) && constraint_ok,
        format!(
            "residuals {}, orders {orders:.2?}, bracket constraint {worst:.1e}",
            sci(&residuals)
        ),
    ))
}

fn submersion(_: &mut Ledger) -> Result<Outcome> {
    let grid = Grid::new(2, 32)?;
    let mut s = Sampler::new(grid, 21);
    let rho = s.density(WeightMode::Unit, 2, 0.4)?;
    let raw = s.scalars(2).iter().map(grad).collect();
    let u = project_constraint(raw, &rho)?;
    let (value, _) = mdens_metric(&anchor(&u, &rho)?, &rho)?;
    let norm = u.norm_sq(&rho)?;
    let identity = (value - norm).abs();

    let mut excess = f64::NEG_INFINITY;
    for _ in 0..20 {
        let u = s.velocity(&rho)?;
        let (value, _) = mdens_metric(&anchor(&u, &rho)?, &rho)?;
        excess = excess.max(value - u.norm_sq(&rho)?);
    }
    Ok(Outcome::new(
        identity <= 1e-10 && excess <= 1e-10,
        format!("gradient mismatch {identity:.3e}, worst metric - norm {excess:.3e}"),
    ))
}

fn pushforward(_: &mut Ledger) -> Result<Outcome> {
    let s = scenario(ScenarioKind::OneDTwoPhase, 256)?;
    let r = pushforward_check_1d(&s, 0.5, 1e-3)?;
    let worst = r.mismatch.iter().fold(0.0_f64, |m, v| m.max(*v));
    Ok(Outcome::new(
        worst <= 1e-4,
        format!("mismatch {}, min jacobian {:.3}", sci(&r.mismatch), r.min_jacobian),
    ))
}

/// Single-phase incompressible Euler in vorticity-streamfunction form,
/// advanced with classical RK4 on the vorticity spectrum. Written directly
/// against the FFT so that it shares no code with the library.
struct VorticityOracle {
    n: usize,
    omega: Vec<Complex64>,
    mean: [f64; 2],
    kx: Vec<f64>,
}

impl VorticityOracle {
    fn wavenumber(i: usize, n: usize) -> f64 {
        if 2 * i == n {
            0.0
        } else if 2 * i < n {
            i as f64
        } else {
            i as f64 - n as f64
        }
    }

    /// Velocity nodal values `u[ix * n + iy]` with `x = 2 pi ix / n`.
    fn new(n: usize, u: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let h = 2.0 * PI / n as f64;
        let mut ux = vec![Complex64::default(); n * n];
        let mut uy = ux.clone();
        let mut mean = [0.0; 2];
        for ix in 0..n {
            for iy in 0..n {
                let v = u(ix as f64 * h, iy as f64 * h);
                ux[ix * n + iy] = v[0].into();
                uy[ix * n + iy] = v[1].into();
                mean[0] += v[0] / (n * n) as f64;
                mean[1] += v[1] / (n * n) as f64;
            }
        }
        let kx: Vec<f64> = (0..n).map(|i| Self::wavenumber(i, n)).collect();
        let mut o = Self {
            n,
            omega: Vec::new(),
            mean,
            kx,
        };
        o.fft(&mut ux, false);
        o.fft(&mut uy, false);
        let mut omega = vec![Complex64::default(); n * n];
        for ix in 0..n {
            for iy in 0..n {
                let i = ix * n + iy;
                omega[i] = Complex64::i() * (o.kx[ix] * uy[i] - o.kx[iy] * ux[i]);
            }
        }
        o.omega = omega;
        o
    }

    fn fft(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let mut planner = FftPlanner::new();
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        for row in data.chunks_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex64::default(); n];
        for iy in 0..n {
            for ix in 0..n {
                col[ix] = data[ix * n + iy];
            }
            plan.process(&mut col);
            for ix in 0..n {
                data[ix * n + iy] = col[ix];
            }
        }
        if inverse {
            let s = 1.0 / (n * n) as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }

    fn full_k2(&self, i: usize) -> f64 {
        let n = self.n as f64;
        let k = |j: usize| if 2 * j < self.n { j as f64 } else { j as f64 - n };
        let (a, b) = (k(i / self.n), k(i % self.n));
        a * a + b * b
    }

    /// Nodal velocity from a vorticity spectrum: `u = grad^perp psi + mean`,
    /// `-lap psi = omega`.
    fn velocity(&self, omega: &[Complex64]) -> [Vec<f64>; 2] {
        let n = self.n;
        let mut ux = vec![Complex64::default(); n * n];
        let mut uy = ux.clone();
        for i in 0..n * n {
            let k2 = self.full_k2(i);
            if k2 == 0.0 {
                continue;
            }
            let psi = omega[i] / k2;
            let (kx, ky) = (self.kx[i / n], self.kx[i % n]);
            ux[i] = Complex64::i() * ky * psi;
            uy[i] = -Complex64::i() * kx * psi;
        }
        self.fft(&mut ux, true);
        self.fft(&mut uy, true);
        [
            ux.iter().map(|v| v.re + self.mean[0]).collect(),
            uy.iter().map(|v| v.re + self.mean[1]).collect(),
        ]
    }

    /// `d omega / dt = -u . grad omega`, in spectral space.
    fn rhs(&self, omega: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let [ux, uy] = self.velocity(omega);
        let mut wx: Vec<Complex64> = (0..n * n).map(|i| Complex64::i() * self.kx[i / n] * omega[i]).collect();
        let mut wy: Vec<Complex64> = (0..n * n).map(|i| Complex64::i() * self.kx[i % n] * omega[i]).collect();
        self.fft(&mut wx, true);
        self.fft(&mut wy, true);
        let mut out: Vec<Complex64> = (0..n * n)
            .map(|i| (-(ux[i] * wx[i].re + uy[i] * wy[i].re)).into())
            .collect();
        self.fft(&mut out, false);
        out
    }

    fn step(&mut self, dt: f64) {
        let shift =
            |k: &[Complex64], c: f64| -> Vec<Complex64> { self.omega.iter().zip(k).map(|(w, k)| w + k * c).collect() };
        let k1 = self.rhs(&self.omega);
        let k2 = self.rhs(&shift(&k1, dt / 2.0));
        let k3 = self.rhs(&shift(&k2, dt / 2.0));
        let k4 = self.rhs(&shift(&k3, dt));
        for i in 0..self.omega.len() {
            self.omega[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
}

fn initial_velocity(x: f64, y: f64) -> [f64; 2] {
    // u = grad^perp psi + (0.3, -0.2), psi = sin x sin y + 0.5 cos(2x + y) + 0.3 sin(x - 3y)
    let dpsi_dx = x.cos() * y.sin() - (2.0 * x + y).sin() + 0.3 * (x - 3.0 * y).cos();
    let dpsi_dy = x.sin() * y.cos() - 0.5 * (2.0 * x + y).sin() - 0.9 * (x - 3.0 * y).cos();
    [dpsi_dy + 0.3, -dpsi_dx - 0.2]
}

fn reduction_oracles(ledger: &mut Ledger) -> Result<Outcome> {
    let (n, dt, t_end) = (64, 1e-3_f64, 0.1_f64);
    let grid = Grid::new(2, n)?;
    let u0 = VectorField::from_fn(grid, |[x, y]| initial_velocity(x, y));

    let mut oracle = VorticityOracle::new(n, initial_velocity);
    for _ in 0..100 {
        oracle.step(dt);
    }
    let [ox, oy] = oracle.velocity(&oracle.omega);

    let rho = MultiDensity::from_mode(WeightMode::Unit, vec![ScalarField::constant(grid, 1.0)])?;
    let single0 = FlowState::projected(rho, vec![u0.clone()])?;
    let single = ledger.run(single0, t_end, dt)?;
    let u = single.u.phase(0);
    let vs_oracle = (0..grid.len()).fold(0.0_f64, |m, i| {
        m.max((u.component(0).values()[i] - ox[i]).abs())
            .max((u.component(1).values()[i] - oy[i]).abs())
    });

    let eq0 = scenario(ScenarioKind::EqualVelocity, n)?;
    let phases = eq0.phases();
    let eq0 = FlowState::projected(eq0.rho, vec![u0; phases])?;
    let eq = ledger.run(eq0, t_end, dt)?;
    let vs_single = eq.u.fields().iter().fold(0.0_f64, |m, v| m.max((v - u).max_abs()));

    Ok(Outcome::new(
        vs_oracle <= 1e-9 && vs_single <= 1e-9,
        format!(
            "single phase vs vorticity solver {vs_oracle:.3e}, {phases} equal phases vs single phase {vs_single:.3e}"
        ),
    ))
}

fn elliptic_solvers(_: &mut Ledger) -> Result<Outcome> {
    let grid = Grid::new(2, 64)?;
    let exact = ScalarField::from_fn(grid, |[x, y]| x.sin() * (2.0 * y).cos() + 0.3 * (3.0 * x + y).cos());
    let lap = ScalarField::from_fn(grid, |[x, y]| {
        -5.0 * x.sin() * (2.0 * y).cos() - 3.0 * (3.0 * x + y).cos()
    });
    let plain = (&solve_poisson(&lap)? - &exact).max_abs();

    let rho = ScalarField::from_fn(grid, |[x, y]| 0.55 + 0.45 * x.sin() * y.cos());
    // div(rho grad f) = rho lap f + grad rho . grad f
    let g = ScalarField::from_fn(grid, |[x, y]| {
        let r = 0.55 + 0.45 * x.sin() * y.cos();
        let (rx, ry) = (0.45 * x.cos() * y.cos(), -0.45 * x.sin() * y.sin());
        let fx = x.cos() * (2.0 * y).cos() - 0.9 * (3.0 * x + y).sin();
        let fy = -2.0 * x.sin() * (2.0 * y).sin() - 0.3 * (3.0 * x + y).sin();
        let lf = -5.0 * x.sin() * (2.0 * y).cos() - 3.0 * (3.0 * x + y).cos();
        r * lf + rx * fx + ry * fy
    });
    let sol = solve_weighted_poisson_with(&rho, &g, &SolverSettings::default())?;
    let weighted = (&sol.solution - &exact).max_abs();
    Ok(Outcome::new(
        plain <= 1e-10 && weighted <= 1e-10 && rho.min() >= 0.1 - 1e-12,
        format!(
            "unweighted {plain:.3e}, weighted {weighted:.3e} ({} iterations)",
            sol.iterations
        ),
    ))
}

type Criterion = (&'static str, fn(&mut Ledger) -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [(usize, Criterion); 12] = [
        (1, ("Taylor-Green stationarity", stationarity)),
        (2, ("energy conservation order", energy_conservation)),
        (3, ("mass conservation", mass_conservation)),
        (11, ("single-phase reduction", reduction_oracles)),
        (4, ("constraint maintenance", constraint_maintenance)),
        (5, ("velocity and coset forms agree", hamiltonian_consistency)),
        (6, ("vorticity transport", kelvin_transport)),
        (7, ("Poisson tensor algebra", poisson_algebra)),
        (8, ("bracket Leibniz rule", leibniz_rule)),
        (9, ("submersion identity", submersion)),
        (10, ("flow-map pushforward", pushforward)),
        (12, ("elliptic solvers", elliptic_solvers)),
    ];
    let mut ledger = Ledger::default();
    let mut results = Vec::new();
    for (id, (name, check)) in criteria {
        let clock = Instant::now();
        let (pass, detail) = match check(&mut ledger) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        results.push((id, name, pass, detail, clock.elapsed().as_secs_f64()));
    }
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, name, pass, detail, secs) in &results {
        println!(
            "[{}] {id:>2} {name}: {detail} ({secs:.1} s)",
            if *pass { "PASS" } else { "FAIL" }
        );
        failed += usize::from(!pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
