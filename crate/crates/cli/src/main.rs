//! `chainlab`: run coupled-chain experiments from a JSON config.
//!
//! Exit codes: 0 ok, 2 config error, 3 numerical divergence, 4 detector
//! degeneracy, 1 I/O failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ExperimentConfig;

/// Environment variable that sets the worker thread count.
const THREADS_ENV: &str = "CHAINLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "chainlab",
    version,
    about = "Competing causal chain experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate or integrate the model; writes trajectory.csv (n,x,y).
    Simulate(RunArgs),
    /// Sweep the growth rate; writes bifurcation.csv (r,chain,value).
    Bifurcate(RunArgs),
    /// Simulate with seeded parameter shocks; writes trajectory.csv and events.csv.
    Perturb(RunArgs),
    /// Run all causal-direction detectors; writes report.json.
    Detect(RunArgs),
    /// Clamp one chain; writes trajectory.csv and shift.json.
    Intervene(RunArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] chainlab_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_divergence() => 3,
            CliError::Core(e) if e.is_degeneracy() => 4,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

fn load(args: &RunArgs, detect: bool) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    config.validate()?;
    if detect {
        config.validate_detect()?;
    }
    Ok(config.normalized())
}

type Handler = fn(&ExperimentConfig) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Ok(n) = std::env::var(THREADS_ENV) {
        let threads: usize = n.parse().map_err(|_| {
            CliError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {n:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let (args, command): (&RunArgs, Handler) = match &cli.command {
        Command::Simulate(a) => (a, commands::simulate),
        Command::Bifurcate(a) => (a, commands::bifurcate),
        Command::Perturb(a) => (a, commands::perturb),
        Command::Detect(a) => (a, commands::detect),
        Command::Intervene(a) => (a, commands::intervene),
    };
    let config = load(args, matches!(cli.command, Command::Detect(_)))?;
    command(&config)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
