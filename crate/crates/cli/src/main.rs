//! `fkpp`: stationary profiles, exact solutions, simulations, comparison
//! certificates and parameter sweeps for `u_t = (u^(m-1) u_x)_x + u^p - u^q`.
//!
//! Exit codes: 0 ok, 1 i/o, 2 parameter error, 3 solver configuration
//! error, 4 certification failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::config::Construction;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "fkpp", version, about = "Generalized Fisher-KPP toolkit")]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Override a configuration value, e.g. `--set model.m=3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the stationary profile and print its constants.
    Stationary,
    /// Tabulate a separable exact solution.
    Exact,
    /// Run the explicit solver from the configured initial condition.
    Simulate,
    /// Certify a comparison construction.
    Verify {
        /// Overrides `verify.construction`.
        #[arg(long, value_enum)]
        construction: Option<ConstructionArg>,
    },
    /// Run the solver over multiples of the stationary profile.
    Sweep,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ConstructionArg {
    Scaled,
    Selfsimilar,
    Porous,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = config::load(cli.config.as_deref(), &cli.set)?;
    if let Command::Verify { construction: Some(c) } = cli.command {
        cfg.verify.construction = match c {
            ConstructionArg::Scaled => Construction::Scaled,
            ConstructionArg::Selfsimilar => Construction::Selfsimilar,
            ConstructionArg::Porous => Construction::Porous,
        };
    }
    if cli.workers == Some(0) {
        return Err(CliError::Config("--workers must be at least 1".into()));
    }
    let doc = serde_json::to_value(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    std::fs::create_dir_all(&cli.out)?;
    let ctx = Context { cfg: &cfg, doc: &doc, out: &cli.out, workers: cli.workers };
    match cli.command {
        Command::Stationary => commands::stationary(&ctx),
        Command::Exact => commands::exact(&ctx),
        Command::Simulate => commands::simulate(&ctx),
        Command::Verify { .. } => commands::verify(&ctx),
        Command::Sweep => commands::sweep(&ctx),
    }
    .map(|_| ())
}
