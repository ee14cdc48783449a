//! `bbm` — simulate critical branching Brownian motion with absorption and
//! verify it against its closed-form laws.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use bbm_cli::acceptance::{self, AcceptanceContext};
use bbm_cli::config::{ExperimentConfig, ExperimentKind};
use bbm_cli::experiments;
use bbm_cli::runner::resolve_workers;

#[derive(Parser)]
#[command(name = "bbm", version, about = "branching Brownian motion with absorption: simulation and verification lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (falls back to BBM_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Emit full particle positions in snapshot logs.
    #[arg(long)]
    full_positions: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicates and log snapshot functionals.
    Simulate(CommonArgs),
    /// Run the full acceptance suite; nonzero exit on any failure.
    Verify(CommonArgs),
    /// Tabulate an analytic curve on a grid.
    DensityTable(CommonArgs),
    /// Distribution of the descendant count K(y).
    Neveu(CommonArgs),
    /// Full runs to extinction over a sweep of start heights.
    Extinction(CommonArgs),
    /// Predicted windows and the boundary ODE check.
    Windows(CommonArgs),
}

fn load_config(args: &CommonArgs, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => serde_json::from_str("{}").expect("empty config"),
    };
    cfg.check_kind(kind)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.full_positions {
        cfg.full_positions = true;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let (kind, args) = match &cli.command {
        Command::Simulate(a) => (ExperimentKind::Simulate, a.clone()),
        Command::Verify(a) => (ExperimentKind::Verify, a.clone()),
        Command::DensityTable(a) => (ExperimentKind::DensityTable, a.clone()),
        Command::Neveu(a) => (ExperimentKind::Neveu, a.clone()),
        Command::Extinction(a) => (ExperimentKind::Extinction, a.clone()),
        Command::Windows(a) => (ExperimentKind::Windows, a.clone()),
    };

    if matches!(kind, ExperimentKind::Verify) {
        let seed = args
            .seed
            .or_else(|| {
                args.config
                    .as_ref()
                    .and_then(|p| ExperimentConfig::from_path(p).ok())
                    .map(|c| c.seed)
            })
            .unwrap_or(acceptance::DEFAULT_SEED);
        let workers = resolve_workers(args.workers, None);
        let ctx = AcceptanceContext::new(seed, workers);
        eprintln!("running acceptance suite (seed {seed}, {workers} workers)...");
        let results = acceptance::run_all(&ctx)?;
        let mut failed = 0;
        for r in &results {
            println!("{}", r.line());
            if !r.pass {
                failed += 1;
            }
        }
        return Ok(if failed == 0 {
            println!("acceptance: all {} criteria passed", results.len());
            ExitCode::SUCCESS
        } else {
            println!("acceptance: {failed}/{} criteria FAILED", results.len());
            ExitCode::from(1)
        });
    }

    let cfg = load_config(&args, kind)?;
    let workers = resolve_workers(args.workers, cfg.workers);
    let report = match kind {
        ExperimentKind::Simulate => experiments::simulate(&cfg, workers, args.out.as_deref())?,
        ExperimentKind::DensityTable => experiments::density_table(&cfg, args.out.as_deref())?,
        ExperimentKind::Neveu => experiments::neveu(&cfg, workers, args.out.as_deref())?,
        ExperimentKind::Extinction => experiments::extinction(&cfg, workers, args.out.as_deref())?,
        ExperimentKind::Windows => experiments::windows(&cfg, args.out.as_deref())?,
        ExperimentKind::Verify => unreachable!(),
    };
    println!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
