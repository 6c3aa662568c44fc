// SPDX-License-Identifier: Apache-2.0

//! `hls-dse`: run explorations, brute-force synthetic fixtures and compare
//! the resulting frontiers.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hls_dse::evaluator::{SpecError, DEFAULT_TIMEOUT_S};
use hls_dse::explorer::StopReason;
use hls_dse::report::{compare, comparison_csv};
use hls_dse::{
    brute_force, Capacities, ConfigError, DesignSpace, EvaluatorSpec, Explorer, ExplorerConfig,
    Objectives, ParetoFrontier,
};
use log::{info, warn};

const CHECKPOINT_FILE: &str = "checkpoint.json";

#[derive(Debug, Parser)]
#[command(
    name = "hls-dse",
    version,
    about = "Design-space exploration for HLS directives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Explore a design space and write the frontier, history and summary.
    Run(RunArgs),
    /// Evaluate every point of a synthetic fixture.
    Oracle(OracleArgs),
    /// Compare finished runs, optionally against an oracle frontier.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Knob file (CSV).
    #[arg(long, required_unless_present = "resume")]
    knobs: Option<PathBuf>,
    /// `subprocess:TEMPLATE` or `synthetic:FIXTURE`.
    #[arg(long, required_unless_present = "resume")]
    evaluator: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "dse-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluator calls, including initial samples.
    #[arg(long)]
    max_points: Option<usize>,
    /// Initial random samples.
    #[arg(long)]
    init: Option<usize>,
    #[arg(long)]
    time_budget_s: Option<f64>,
    /// JSON file overriding explorer configuration fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Continue from a checkpoint. Only `--out`, `--max-points` and
    /// `--time-budget-s` may accompany it.
    #[arg(
        long,
        conflicts_with_all = ["knobs", "evaluator", "seed", "init", "config", "eval_timeout_s", "capacities"]
    )]
    resume: Option<PathBuf>,
    /// Per-call timeout for subprocess evaluators.
    #[arg(long)]
    eval_timeout_s: Option<f64>,
    /// Available `lut,ff,dsp,bram`.
    #[arg(long)]
    capacities: Option<Capacities>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    knobs: PathBuf,
    /// `synthetic:FIXTURE`.
    #[arg(long)]
    evaluator: String,
    #[arg(long, default_value = "oracle-out")]
    out: PathBuf,
    /// JSON configuration; only the resource weights are used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    capacities: Option<Capacities>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Run output directory holding `pareto.csv`.
    #[arg(long = "run", required = true)]
    runs: Vec<PathBuf>,
    /// Frontier CSV, such as `oracle_pareto.csv`.
    #[arg(long)]
    oracle: Option<PathBuf>,
    /// Hypervolume reference `latency,resource`.
    #[arg(long = "ref", value_parser = parse_reference)]
    reference: Option<Objectives>,
    /// Where `comparison.csv` is written.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
enum Failure {
    /// Bad flag or input; exit 2.
    Config { flag: &'static str, message: String },
    /// Run stopped early with a checkpoint written; exit 3.
    Aborted(String),
    /// Output could not be written; exit 1.
    Io(String),
}

impl Failure {
    fn config(flag: &'static str, message: impl ToString) -> Self {
        Failure::Config {
            flag,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config { .. } => 2,
            Failure::Aborted(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config { flag, message } => write!(f, "{flag}: {message}"),
            Failure::Aborted(m) => write!(f, "run aborted: {m}"),
            Failure::Io(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

fn parse_reference(s: &str) -> Result<Objectives, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad reference `{s}`: {e}"))?;
    match parts[..] {
        [l, r] if l.is_finite() && r.is_finite() && l > 0.0 && r > 0.0 => Ok(Objectives::new(l, r)),
        _ => Err(format!(
            "expected two positive numbers `latency,resource`, got `{s}`"
        )),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn read(flag: &'static str, path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(flag, format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<DesignSpace, Failure> {
    DesignSpace::from_csv(&read("--knobs", path)?).map_err(|e| Failure::config("--knobs", e))
}

fn load_config(path: Option<&Path>) -> Result<ExplorerConfig, Failure> {
    match path {
        None => Ok(ExplorerConfig::default()),
        Some(p) => {
            serde_json::from_str(&read("--config", p)?).map_err(|e| Failure::config("--config", e))
        }
    }
}

fn spec_flag(e: &SpecError) -> &'static str {
    match e {
        SpecError::BadTimeout => "--eval-timeout-s",
        SpecError::BadCapacities => "--capacities",
        _ => "--evaluator",
    }
}

fn config_flag(e: &ConfigError) -> &'static str {
    match e {
        ConfigError::NoInit => "--init",
        ConfigError::InitExceedsBudget { .. } => "--init/--max-points",
        ConfigError::TimeBudget => "--time-budget-s",
        ConfigError::Evaluator(s) => spec_flag(s),
        _ => "--config",
    }
}

fn fresh_explorer(args: &RunArgs) -> Result<Explorer, Failure> {
    let (Some(knobs), Some(evaluator)) = (&args.knobs, &args.evaluator) else {
        unreachable!("clap requires --knobs and --evaluator without --resume");
    };
    let space = load_space(knobs)?;
    let spec = EvaluatorSpec::parse(
        evaluator,
        args.eval_timeout_s.unwrap_or(DEFAULT_TIMEOUT_S),
        args.capacities.unwrap_or_default(),
    )
    .map_err(|e| Failure::config(spec_flag(&e), e))?;
    let mut config = load_config(args.config.as_deref())?;
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(m) = args.max_points {
        config.max_points = m;
    }
    if let Some(n) = args.init {
        config.n_init = n;
    }
    if let Some(t) = args.time_budget_s {
        config.time_budget_s = Some(t);
    }
    Explorer::new(config, space, spec).map_err(|e| Failure::config(config_flag(&e), e))
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let mut explorer = match &args.resume {
        Some(path) => {
            let mut ex = Explorer::resume(path).map_err(|e| Failure::config("--resume", e))?;
            ex.set_budget(args.max_points, args.time_budget_s)
                .map_err(|e| Failure::config(config_flag(&e), e))?;
            info!(
                "resumed at {} evaluations, {} iterations",
                ex.state().evaluations,
                ex.state().history.len()
            );
            ex
        }
        None => fresh_explorer(args)?,
    };
    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let checkpoint = args.out.join(CHECKPOINT_FILE);

    let mut evaluator = explorer.evaluator().clone();
    while !explorer.is_finished() {
        let before = explorer.state().evaluations;
        if let Err(e) = explorer.step(&mut evaluator) {
            explorer
                .checkpoint(&checkpoint)
                .map_err(|c| Failure::io(&checkpoint, c))?;
            return Err(Failure::Aborted(format!(
                "{e}; checkpoint written to {}",
                checkpoint.display()
            )));
        }
        // Evaluations are the expensive part; never lose one.
        if explorer.state().evaluations != before {
            explorer
                .checkpoint(&checkpoint)
                .map_err(|c| Failure::io(&checkpoint, c))?;
        }
    }
    explorer
        .checkpoint(&checkpoint)
        .map_err(|c| Failure::io(&checkpoint, c))?;

    let report = explorer.report();
    report
        .write_to(&args.out)
        .map_err(|e| Failure::io(&args.out, e))?;
    if report.stop == Some(StopReason::IterationCap) {
        warn!(
            "stopped at the iteration cap after {} evaluations; proposals kept being rejected",
            report.dataset.len()
        );
    }
    let s = report.summary();
    emit(&format!(
        "evaluations {} (ok {}, error {}, timeout {}), iterations {}, frontier {}, hypervolume {:.6}",
        s.evaluations,
        s.status_counts.ok,
        s.status_counts.error,
        s.status_counts.timeout,
        s.iterations,
        s.frontier_size,
        s.hypervolume
    ));
    emit(&report.frontier.to_csv());
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), Failure> {
    let space = load_space(&args.knobs)?;
    let spec = EvaluatorSpec::parse(
        &args.evaluator,
        DEFAULT_TIMEOUT_S,
        args.capacities.unwrap_or_default(),
    )
    .map_err(|e| Failure::config(spec_flag(&e), e))?;
    let EvaluatorSpec::Synthetic { fixture, available } = spec else {
        return Err(Failure::config(
            "--evaluator",
            "the oracle needs a synthetic evaluator",
        ));
    };
    let weights = load_config(args.config.as_deref())?.weights;
    if !weights.is_valid() {
        return Err(Failure::config("--config", ConfigError::Weights));
    }
    let all =
        brute_force(fixture, &space, &available).map_err(|e| Failure::config("--knobs", e))?;

    let mut csv =
        String::from("point_id,status,latency_us,weighted_resource,lut,ff,dsp,bram,knobs\n");
    let mut frontier = ParetoFrontier::new();
    for (point, record) in &all {
        let (lat, res) = match record.objectives(&weights) {
            Some(o) => {
                frontier.update(o, record.point_id.clone());
                (o.latency.to_string(), o.resource.to_string())
            }
            None => (String::new(), String::new()),
        };
        let ratios = record.ratios.map_or_else(
            || ",,,".to_string(),
            |r| format!("{},{},{},{}", r.lut, r.ff, r.dsp, r.bram),
        );
        let _ = writeln!(
            csv,
            "{},{},{lat},{res},{ratios},{}",
            record.point_id,
            record.status.name(),
            point.describe()
        );
    }
    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let all_path = args.out.join("oracle_all.csv");
    fs::write(&all_path, csv).map_err(|e| Failure::io(&all_path, e))?;
    let front_path = args.out.join("oracle_pareto.csv");
    fs::write(&front_path, frontier.to_csv()).map_err(|e| Failure::io(&front_path, e))?;
    emit(&format!(
        "{} points, {} on the frontier\n",
        all.len(),
        frontier.len()
    ));
    Ok(())
}

fn load_frontier(flag: &'static str, path: &Path) -> Result<ParetoFrontier, Failure> {
    ParetoFrontier::from_csv(&read(flag, path)?)
        .map_err(|e| Failure::config(flag, format!("{}: {e}", path.display())))
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let runs = args
        .runs
        .iter()
        .map(|dir| {
            let f = load_frontier("--run", &dir.join("pareto.csv"))?;
            Ok((dir.display().to_string(), f))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let oracle = args
        .oracle
        .as_deref()
        .map(|p| load_frontier("--oracle", p))
        .transpose()?;
    let comparison = compare(&runs, oracle.as_ref(), args.reference);
    emit(&comparison.table());
    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let path = args.out.join("comparison.csv");
    fs::write(&path, comparison_csv(&runs, oracle.as_ref())).map_err(|e| Failure::io(&path, e))?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
