//! `curtail` — config-driven front end for the curtailment and
//! line-investment toolkit.
//!
//! Runs are defined by a sectioned TOML file plus command-line overrides;
//! every invocation is deterministic for a fixed configuration and seed,
//! and every CSV it writes starts with the configuration hash so artifacts
//! are always traceable.

mod commands;
mod config;
mod error;
mod output;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::RunError;

#[derive(Parser)]
#[command(
    name = "curtail",
    version,
    about = "Wind curtailment simulation and line-investment game solver",
    after_help = "Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric failure."
)]
struct Cli {
    /// Configuration file (defaults apply when the default path is absent).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override the configured random seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Override the configured output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Override one config value, e.g. --set costs.p_t="0.3 pG".
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded synthetic wind-speed series, one CSV per location.
    SynthWind,
    /// Clean raw anemometer/demand CSVs: gap-fill, convert units, build
    /// the hour-season demand profile.
    Ingest,
    /// Fit Weibull (speed) and Beta (normalised power) distributions per
    /// location.
    Fit,
    /// Simulate curtailment rules over the fleet and report capacity
    /// factors, fairness and event counts.
    Simulate,
    /// Solve the leader/follower capacity game for the configured costs.
    Equilibrium,
    /// Sweep one cost parameter over a scenario and emit trend tables.
    Sweep,
}

fn run(cli: &Cli) -> Result<(), RunError> {
    let default_path = PathBuf::from("curtail.toml");
    let (path, allow_missing) = match &cli.config {
        Some(p) => (p.clone(), false),
        None => (default_path, true),
    };
    let config = RunConfig::load(
        &path,
        &cli.set,
        cli.seed,
        cli.out.as_deref(),
        allow_missing,
    )?;

    match cli.command {
        Command::SynthWind => commands::synth_wind(&config),
        Command::Ingest => commands::ingest(&config),
        Command::Fit => commands::fit(&config),
        Command::Simulate => commands::simulate_cmd(&config),
        Command::Equilibrium => commands::equilibrium(&config),
        Command::Sweep => commands::sweep(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
