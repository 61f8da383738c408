use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multiflow::dynamics::{consistency_residual, mdens_metric, step_count, FlowState, Simulation, StepOptions};
use multiflow::scenario::{
    build_scenario, build_tangent, load_config, read_snapshot, write_snapshot, DiagnosticsWriter, ScenarioConfig,
    ScenarioKind,
};
use multiflow::spectral::Grid;
use multiflow::state::{Check, Validate, WeightMode};
use multiflow::verify::{leibniz_study, observed_orders, poisson_structure_suite};
use multiflow::{tolerance, Error};

#[derive(Parser)]
#[command(
    name = "multiflow",
    version,
    about = "Multiphase incompressible Euler flows on periodic domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Built-in scenario with default settings.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Seed for randomized suites (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Time-march a scenario, writing diagnostics and snapshots every stride.
    Run,
    /// Run the invariant suite on a scenario or a snapshot.
    Check {
        /// Snapshot file to check instead of a scenario.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Time-step refinement study against a fine reference run.
    Convergence {
        /// Number of refinement levels.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Randomized algebroid suite: tensor algebra, duality and Leibniz rule.
    BracketTest {
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Evaluate the induced metric on the configured tangent density.
    Metric,
}

/// Failure classes mapped to exit codes 1 and 2.
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

struct Ctx {
    common: Common,
}

impl Ctx {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.common.quiet {
            println!("{}", msg.as_ref());
        }
    }

    fn config(&self) -> Result<ScenarioConfig, Failure> {
        let mut cfg = match (&self.common.config, &self.common.scenario) {
            (Some(path), None) => load_config(path)?,
            (None, Some(name)) => {
                let kind = ScenarioKind::from_name(name)?;
                let n = if kind.default_dim() == 1 { 64 } else { 32 };
                ScenarioConfig::preset(kind, n)
            }
            (Some(_), Some(_)) => {
                return Err(Failure::Validation(
                    "pass either --config or --scenario, not both".into(),
                ))
            }
            (None, None) => return Err(Failure::Validation("one of --config or --scenario is required".into())),
        };
        if let Some(out) = &self.common.out {
            cfg.out = out.clone();
        }
        if let Some(seed) = self.common.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn seed(&self) -> u64 {
        self.common.seed.unwrap_or(0)
    }
}

fn create_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Validation(format!("{}: {e}", dir.display())))
}

fn run(ctx: &Ctx) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    create_out(&cfg.out)?;
    let state = build_scenario(&cfg)?;
    let phases = state.phases();
    let opts = StepOptions { dealias: cfg.dealias };
    let mut sim = Simulation::new(state, opts);
    if cfg.checks.kelvin {
        sim = sim.with_kelvin()?;
    }
    if cfg.checks.pushforward {
        sim = sim.with_flow_map()?;
    }
    let file = fs::File::create(cfg.out.join("diagnostics.csv")).map_err(Error::from)?;
    let mut diag = DiagnosticsWriter::new(BufWriter::new(file), phases)?;
    let emit = |sim: &Simulation, diag: &mut DiagnosticsWriter<BufWriter<fs::File>>, k: usize| -> Result<(), Failure> {
        diag.write(&sim.diagnostics()?)?;
        write_snapshot(sim.state(), cfg.out.join(format!("snapshot_{k:06}.mpf")))?;
        if cfg.checks.consistency {
            let c = consistency_residual(sim.state())?;
            if c.momentum > tolerance::CONSTRAINT || c.density > tolerance::WEIGHTED_SOLVE {
                return Err(Failure::Validation(format!(
                    "formulations disagree at t = {}: momentum {:e}, density {:e}",
                    sim.state().t,
                    c.momentum,
                    c.density
                )));
            }
        }
        Ok(())
    };

    ctx.say(format!(
        "{}: {}D, N = {}, {} phases, dt = {}, T = {}",
        cfg.scenario,
        cfg.dim(),
        cfg.n,
        phases,
        cfg.dt,
        cfg.t_end
    ));
    emit(&sim, &mut diag, 0)?;
    let (steps, dt) = step_count(cfg.t_end, cfg.dt)?;
    for k in 1..=steps {
        let t_before = sim.state().t;
        if let Err(e) = sim.step(dt) {
            diag.finish()?;
            return Err(match e {
                Error::PositivityLoss { .. } => e.into(),
                e if e.is_numerical() => Failure::Numerical(format!("step {k} from t = {t_before}: {e}")),
                e => e.into(),
            });
        }
        if k % cfg.stride == 0 || k == steps {
            emit(&sim, &mut diag, k)?;
        }
    }
    diag.finish()?;

    let drift = sim.reports().iter().fold(0.0_f64, |m, r| m.max(r.constraint_drift));
    let div = sim.reports().iter().fold(0.0_f64, |m, r| m.max(r.divergence_residual));
    ctx.say(format!(
        "done: {steps} steps, max density-sum drift {drift:.3e}, max divergence residual {div:.3e}"
    ));
    if let Some(errs) = sim.kelvin_errors()? {
        ctx.say(format!("vorticity transport error per phase: {}", fmt_list(&errs)));
    }
    if let Some(tracker) = sim.flow_map() {
        let mismatch: Vec<f64> = tracker
            .pushforward()
            .iter()
            .zip(sim.state().rho.rho())
            .map(|(a, b)| (a - b).max_abs())
            .collect();
        ctx.say(format!("pushforward mismatch per phase: {}", fmt_list(&mismatch)));
    }
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

fn check(ctx: &Ctx, snapshot: Option<&Path>) -> Result<(), Failure> {
    let state: FlowState = match snapshot {
        Some(p) => read_snapshot(p)?,
        None => build_scenario(&ctx.config()?)?,
    };
    let mut report = state.validate()?;
    let c = consistency_residual(&state)?;
    report.push(Check::at_most(
        "formulation consistency (momentum)",
        c.momentum,
        tolerance::CONSTRAINT,
    ));
    report.push(Check::at_most(
        "formulation consistency (density)",
        c.density,
        tolerance::WEIGHTED_SOLVE,
    ));
    report.push(Check::holds("pressure finite", state.p.is_finite()));
    report.push(Check::holds("energy finite", state.energy().is_finite()));
    ctx.say(report.to_string());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "{} invariant(s) failed",
            report.failures().count()
        )))
    }
}

fn convergence(ctx: &Ctx, levels: usize) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    if levels < 2 {
        return Err(Failure::Validation("--levels must be at least 2".into()));
    }
    create_out(&cfg.out)?;
    let initial = build_scenario(&cfg)?;
    let opts = StepOptions { dealias: cfg.dealias };
    let solve = |dt: f64| -> Result<FlowState, Failure> {
        let mut sim = Simulation::new(initial.clone(), opts);
        sim.run(cfg.t_end, dt, |_, _| Ok(()))?;
        Ok(sim.into_state())
    };
    let reference = solve(cfg.dt / 2f64.powi(levels as i32 + 1))?;
    let mut rows = Vec::new();
    for l in 0..levels {
        let dt = cfg.dt / 2f64.powi(l as i32);
        let s = solve(dt)?;
        let du =
            s.u.fields()
                .iter()
                .zip(reference.u.fields())
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).max_abs()));
        let dr = s
            .rho
            .rho()
            .iter()
            .zip(reference.rho.rho())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).max_abs()));
        rows.push((dt, du.max(dr)));
    }
    let errors: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let orders = observed_orders(&errors);
    let mut f = BufWriter::new(fs::File::create(cfg.out.join("convergence.csv")).map_err(Error::from)?);
    writeln!(f, "dt,error,order").map_err(Error::from)?;
    for (i, (dt, e)) in rows.iter().enumerate() {
        let order = if i == 0 { f64::NAN } else { orders[i - 1] };
        writeln!(f, "{dt:.16e},{e:.16e},{order:.16e}").map_err(Error::from)?;
        ctx.say(format!("dt {dt:.3e}  error {e:.3e}  order {order:.2}"));
    }
    f.flush().map_err(Error::from)?;
    Ok(())
}

fn bracket_test(ctx: &Ctx, cases: usize, n: usize) -> Result<(), Failure> {
    let seed = ctx.seed();
    let grid = Grid::new(2, n)?;
    let mut ok = true;
    for (mode, phases) in [(WeightMode::Unit, 1), (WeightMode::Unit, 2), (WeightMode::Trapezoid, 4)] {
        let r = poisson_structure_suite(grid, mode, phases, cases, seed)?;
        let pass = r.antisymmetry <= 1e-12 && r.bilinearity <= 1e-12 && r.lie_form <= 1e-10 && r.duality <= 1e-10;
        ok &= pass;
        ctx.say(format!(
            "{:?} x{phases}: antisymmetry {:.2e}  bilinearity {:.2e}  two forms {:.2e}  duality {:.2e}  [{}]",
            mode,
            r.antisymmetry,
            r.bilinearity,
            r.lie_form,
            r.duality,
            if pass { "pass" } else { "FAIL" }
        ));
    }
    let steps = [1e-3, 5e-4, 2.5e-4];
    let pts = leibniz_study(grid, 2, &steps, seed)?;
    let orders = observed_orders(&pts.iter().map(|p| p.residual).collect::<Vec<_>>());
    let pass = orders.iter().all(|o| *o >= 0.9)
        && pts
            .iter()
            .all(|p| p.constraint_residual <= 10.0 * p.step * p.step + tolerance::CONSTRAINT);
    ok &= pass;
    for p in &pts {
        ctx.say(format!(
            "Leibniz h = {:.2e}: residual {:.3e}, bracket constraint {:.3e}",
            p.step, p.residual, p.constraint_residual
        ));
    }
    ctx.say(format!(
        "Leibniz observed orders {} [{}]",
        fmt_list(&orders),
        if pass { "pass" } else { "FAIL" }
    ));
    if ok {
        Ok(())
    } else {
        Err(Failure::Validation("bracket suite failed".into()))
    }
}

fn metric(ctx: &Ctx) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    create_out(&cfg.out)?;
    let state = build_scenario(&cfg)?;
    let tangent = cfg.tangent.unwrap_or_default();
    let xi = build_tangent(&tangent, &state.rho, cfg.weight_mode())?;
    let (value, potentials) = mdens_metric(&xi, &state.rho)?;
    let mut f = BufWriter::new(fs::File::create(cfg.out.join("potentials.csv")).map_err(Error::from)?);
    let grid = state.grid();
    let header: Vec<String> = ["x", "y"]
        .iter()
        .take(grid.dim())
        .map(|s| s.to_string())
        .chain((1..=potentials.len()).map(|i| format!("f_{i}")))
        .collect();
    writeln!(f, "{}", header.join(",")).map_err(Error::from)?;
    for (idx, p) in grid.nodes().enumerate() {
        let cols: Vec<String> = p[..grid.dim()]
            .iter()
            .copied()
            .chain(potentials.iter().map(|pot| pot.values()[idx]))
            .map(|v| format!("{v:.16e}"))
            .collect();
        writeln!(f, "{}", cols.join(",")).map_err(Error::from)?;
    }
    f.flush().map_err(Error::from)?;
    fs::write(cfg.out.join("metric.txt"), format!("{value:.16e}\n")).map_err(Error::from)?;
    ctx.say(format!("metric {value:.16e}"));
    Ok(())
}

fn init_threads() {
    if let Some(n) = std::env::var("MULTIFLOW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_threads();
    let ctx = Ctx { common: cli.common };
    let result = match cli.command {
        Command::Run => run(&ctx),
        Command::Check { snapshot } => check(&ctx, snapshot.as_deref()),
        Command::Convergence { levels } => convergence(&ctx, levels),
        Command::BracketTest { cases, n } => bracket_test(&ctx, cases, n),
        Command::Metric => metric(&ctx),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
