//! `cshsim`: command-line harness for the csh-core solver.
//!
//! Subcommands: `simulate`, `equivalence`, `convergence`, `probe-continuity`,
//! `check-estimates`, `angle-sample`, `gen-data`. Trajectories and study
//! tables are CSV (UTF-8, LF, header row, 17-significant-digit decimals);
//! registry and sampler reports are NDJSON. Exit codes: 0 completed,
//! 1 configuration error, 2 solution lost finiteness (NaN abort) — partial
//! artifacts are always followed by a terminal status line on stderr.

mod config;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use csh_core::estimates::{angle_bound_sample, verify_claim_registry};
use csh_core::{
    continuity_probe, convergence_study, curl, gen_lowreg_data, init_from_data, simulate,
    CoreError, CshState, Formulation, Grid, Potential, QuarticGrouping, SimOutcome, StepperConfig,
};
use serde_json::json;
use thiserror::Error;

use config::RunConfig;
use output::{table_csv, trajectory_csv, write_artifact};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("solution lost finiteness at t = {time:.6}")]
    Abort { time: f64 },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Abort { .. } => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::NonFiniteState { time } => CliError::Abort { time },
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<config::ConfigError> for CliError {
    fn from(err: config::ConfigError) -> Self {
        CliError::Config(err.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cshsim",
    version,
    about = "Pseudospectral Chern-Simons-Higgs runs on a periodic box, plus exact exponent checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormulationArg {
    Reformulated,
    Direct,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupingArg {
    FullProduct,
    SplitMultiplier,
}

/// Flags mirroring the config-file keys; explicit flags override the file.
#[derive(Args, Clone, Debug)]
struct RunArgs {
    /// Key=value config file applied before flag overrides.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Grid points per axis (power of two >= 4).
    #[arg(long)]
    n: Option<usize>,
    /// Periodic box side length.
    #[arg(long)]
    length: Option<f64>,
    /// Sobolev index of the data class (phi0 in H^{s+1}, dphi0 in H^s).
    #[arg(long)]
    s: Option<f64>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Comma-separated potential coefficients c1[,c2[,c3]] of V(r) = sum ck r^k.
    #[arg(long)]
    potential: Option<String>,
    /// Data amplitude.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Seed for the data generator.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated seed sweep; each seed runs on its own worker thread
    /// and writes its own output file.
    #[arg(long)]
    seeds: Option<String>,
    /// System formulation to evolve.
    #[arg(long, value_enum)]
    formulation: Option<FormulationArg>,
    /// Discrete grouping of the quartic term in the curl-free tendency.
    #[arg(long, value_enum)]
    grouping: Option<GroupingArg>,
    /// Record every k-th step (0: initial and final states only).
    #[arg(long)]
    record_every: Option<usize>,
    /// Artifact path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evolve one configuration and write the trajectory CSV.
    Simulate(RunArgs),
    /// Run both formulations from identical data and report the terminal
    /// L2 distance in phi as a single NDJSON line.
    Equivalence(RunArgs),
    /// Self-convergence study across a list of time steps.
    Convergence {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated strictly decreasing time steps.
        #[arg(long, default_value = "0.05,0.025,0.0125")]
        dts: String,
    },
    /// Perturb the data by each delta along a fixed random direction and
    /// report terminal solution distances.
    ProbeContinuity {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated perturbation sizes.
        #[arg(long, default_value = "1e-3,1e-4,1e-5")]
        deltas: String,
        /// Seed of the perturbation direction.
        #[arg(long, default_value_t = 42)]
        direction_seed: u64,
    },
    /// Verify the bilinear-exponent registry at an exact regularity and
    /// emit one NDJSON line per registered instance.
    CheckEstimates {
        /// Exact regularity: `p/q`, an integer, or a decimal, optionally
        /// with `+eps`/`-eps` for an infinitesimal offset.
        #[arg(long, default_value = "3/10")]
        reg_s: String,
        /// Artifact path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the angle-bound ratio and emit the NDJSON report.
    AngleSample {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        /// Artifact path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the seeded low-regularity data and report its norms as a
    /// single NDJSON line.
    GenData(RunArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };
    if let Err(err) = dispatch(&cli.cmd) {
        eprintln!("cshsim: {err}");
        exit(err.exit_code());
    }
}

fn dispatch(cmd: &Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Equivalence(args) => cmd_equivalence(args),
        Cmd::Convergence { run, dts } => cmd_convergence(run, dts),
        Cmd::ProbeContinuity {
            run,
            deltas,
            direction_seed,
        } => cmd_continuity(run, deltas, *direction_seed),
        Cmd::CheckEstimates { reg_s, out } => cmd_check_estimates(reg_s, out),
        Cmd::AngleSample { samples, seed, out } => cmd_angle_sample(*samples, *seed, out),
        Cmd::GenData(args) => cmd_gen_data(args),
    }
}

/// Defaults -> config file -> explicit flags, then domain validation.
fn build_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_file(&text, &path.display().to_string())?;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(length) = args.length {
        cfg.length = length;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(t_end) = args.t_end {
        cfg.t_end = t_end;
    }
    if let Some(potential) = &args.potential {
        cfg.set("potential", potential, "--potential")?;
    }
    if let Some(amplitude) = args.amplitude {
        cfg.amplitude = amplitude;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(seeds) = &args.seeds {
        cfg.set("seeds", seeds, "--seeds")?;
    }
    if let Some(formulation) = args.formulation {
        cfg.formulation = match formulation {
            FormulationArg::Reformulated => Formulation::Reformulated,
            FormulationArg::Direct => Formulation::Direct,
        };
    }
    if let Some(grouping) = args.grouping {
        cfg.grouping = match grouping {
            GroupingArg::FullProduct => QuarticGrouping::FullProduct,
            GroupingArg::SplitMultiplier => QuarticGrouping::SplitMultiplier,
        };
    }
    if let Some(record_every) = args.record_every {
        cfg.record_every = record_every;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Generate data for `seed` and build the evolution state.
fn build_state(cfg: &RunConfig, seed: u64) -> Result<CshState, CliError> {
    let grid = Grid::new(cfg.n, cfg.length)?;
    let data = gen_lowreg_data(grid, cfg.s, cfg.amplitude, seed)?;
    let (state, _) = init_from_data(&data.phi0, &data.dphi0, &data.acf0, [0.0, 0.0])?;
    Ok(state)
}

fn stepper(cfg: &RunConfig) -> StepperConfig {
    StepperConfig {
        dt: cfg.dt,
        t_end: cfg.t_end,
        record_every: cfg.record_every,
        formulation: cfg.formulation,
        grouping: cfg.grouping,
        sobolev_s: cfg.s,
        zero_nonlinearity: false,
    }
}

/// One full run: evolve, write the trajectory CSV, print the terminal
/// status line. A NaN abort still writes the partial table, then surfaces
/// as exit code 2.
fn run_one(cfg: &RunConfig, seed: u64, out: Option<PathBuf>) -> Result<SimOutcome, CliError> {
    let state = build_state(cfg, seed)?;
    let potential = Potential::new(cfg.potential.clone())?;
    let outcome = simulate(&state, &stepper(cfg), &potential)?;
    let name = write_artifact(&out, &trajectory_csv(&outcome.records))?;
    match outcome.aborted {
        Some(time) => {
            eprintln!(
                "simulate[seed {seed}]: aborted at t = {time:.6}; wrote {} records to {name}",
                outcome.records.len()
            );
            Err(CliError::Abort { time })
        }
        None => {
            eprintln!(
                "simulate[seed {seed}]: completed t = {:.6}; wrote {} records to {name}",
                outcome.final_time,
                outcome.records.len()
            );
            Ok(outcome)
        }
    }
}

fn cmd_simulate(args: &RunArgs) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let seeds = cfg.sweep_seeds();
    if seeds.len() == 1 {
        return run_one(&cfg, seeds[0], cfg.out.clone()).map(|_| ());
    }
    let base = cfg.out.clone().ok_or_else(|| {
        CliError::Config("a seed sweep needs `out`: each run writes its own file".into())
    })?;
    // Fan the sweep out across worker threads; each run owns its state and
    // output file, so the only shared resource is the (line-buffered)
    // console used for status lines.
    let mut failures: Vec<CliError> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                let cfg = &cfg;
                let path = output::seeded_path(&base, seed);
                scope.spawn(move || run_one(cfg, seed, Some(path)).map(|_| ()))
            })
            .collect();
        for handle in handles {
            if let Err(err) = handle.join().expect("sweep worker panicked") {
                failures.push(err);
            }
        }
    });
    let abort = failures
        .iter()
        .position(|e| matches!(e, CliError::Abort { .. }));
    match abort {
        Some(idx) => Err(failures.swap_remove(idx)),
        None => match failures.into_iter().next() {
            Some(err) => Err(err),
            None => Ok(()),
        },
    }
}

fn cmd_equivalence(args: &RunArgs) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let state = build_state(&cfg, cfg.seed)?;
    let potential = Potential::new(cfg.potential.clone())?;
    let run = |formulation: Formulation| -> Result<SimOutcome, CliError> {
        let outcome = simulate(
            &state,
            &StepperConfig {
                formulation,
                ..stepper(&cfg)
            },
            &potential,
        )?;
        match outcome.aborted {
            Some(time) => {
                eprintln!("equivalence: {formulation:?} run aborted at t = {time:.6}");
                Err(CliError::Abort { time })
            }
            None => Ok(outcome),
        }
    };
    let reformulated = run(Formulation::Reformulated)?;
    let direct = run(Formulation::Direct)?;
    let distance = (&reformulated.final_phi - &direct.final_phi).l2_norm();
    let line = json!({
        "report": "equivalence",
        "n": cfg.n,
        "length": cfg.length,
        "s": cfg.s,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "amplitude": cfg.amplitude,
        "seed": cfg.seed,
        "l2_distance": distance,
    });
    let name = write_artifact(&cfg.out, &format!("{line}\n"))?;
    eprintln!("equivalence: terminal |phi_ref - phi_dir|_L2 = {distance:.6e}; wrote {name}");
    Ok(())
}

fn cmd_convergence(args: &RunArgs, dts: &str) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let dts: Vec<f64> = dts
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("--dts: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let state = build_state(&cfg, cfg.seed)?;
    let potential = Potential::new(cfg.potential.clone())?;
    let report = convergence_study(&state, &stepper(&cfg), &potential, &dts)?;
    let rows: Vec<Vec<f64>> = report
        .rows
        .iter()
        .map(|r| vec![r.dt, r.error, r.gauss_rel])
        .collect();
    let name = write_artifact(&cfg.out, &table_csv("dt,error,gauss_rel", &rows))?;
    let orders: Vec<String> = report.orders.iter().map(|p| format!("{p:.3}")).collect();
    eprintln!(
        "convergence: orders = [{}], rounding-floor = {}; wrote {name}",
        orders.join(", "),
        report.exact
    );
    Ok(())
}

fn cmd_continuity(args: &RunArgs, deltas: &str, direction_seed: u64) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let deltas: Vec<f64> = deltas
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("--deltas: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let data = gen_lowreg_data(grid, cfg.s, cfg.amplitude, cfg.seed)?;
    let potential = Potential::new(cfg.potential.clone())?;
    let report = continuity_probe(
        &data.phi0,
        &data.dphi0,
        &data.acf0,
        [0.0, 0.0],
        &stepper(&cfg),
        &potential,
        &deltas,
        direction_seed,
    )?;
    let rows: Vec<Vec<f64>> = report
        .rows
        .iter()
        .map(|r| vec![r.delta, r.distance, r.ratio])
        .collect();
    let name = write_artifact(&cfg.out, &table_csv("delta,distance,ratio", &rows))?;
    eprintln!(
        "probe-continuity: ratio spread = {:.4}; wrote {name}",
        report.ratio_spread
    );
    Ok(())
}

fn cmd_check_estimates(reg_s: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    let s =
        config::parse_ext_scalar(reg_s).map_err(|e| CliError::Config(format!("--reg-s: {e}")))?;
    let reports = verify_claim_registry(s);
    let mut ndjson = String::new();
    for report in &reports {
        ndjson.push_str(&report.to_ndjson());
        ndjson.push('\n');
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let name = write_artifact(out, &ndjson)?;
    eprintln!(
        "check-estimates: {passed}/{} instances pass at s = {reg_s}; wrote {name}",
        reports.len()
    );
    Ok(())
}

fn cmd_angle_sample(samples: u64, seed: u64, out: &Option<PathBuf>) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    let report = angle_bound_sample(samples, seed);
    let line = serde_json::to_string(&report)
        .map_err(|e| CliError::Config(format!("serializing report: {e}")))?;
    let name = write_artifact(out, &format!("{line}\n"))?;
    eprintln!(
        "angle-sample: max ratio = {:.17e} over {samples} samples (seed {seed}); wrote {name}",
        report.max_ratio
    );
    Ok(())
}

fn cmd_gen_data(args: &RunArgs) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let data = gen_lowreg_data(grid, cfg.s, cfg.amplitude, cfg.seed)?;
    let acf_l2 = (data.acf0[0].l2_norm().powi(2) + data.acf0[1].l2_norm().powi(2)).sqrt();
    let line = json!({
        "report": "gen-data",
        "n": cfg.n,
        "length": cfg.length,
        "s": cfg.s,
        "amplitude": cfg.amplitude,
        "seed": cfg.seed,
        "h_phi0": data.phi0.sobolev_norm(cfg.s + 1.0),
        "h_phi1": data.dphi0.sobolev_norm(cfg.s),
        "acf_l2": acf_l2,
        "acf_curl": curl(&data.acf0[0], &data.acf0[1])?.l2_norm(),
    });
    let name = write_artifact(&cfg.out, &format!("{line}\n"))?;
    eprintln!("gen-data: seed {} on {}^2; wrote {name}", cfg.seed, cfg.n);
    Ok(())
}
