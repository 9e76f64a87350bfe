//! Command-line driver: JSON configuration in, JSON reports and CSV/JSON
//! tables out.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{CliError, Outcome, RunOptions};
pub use config::{ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "swirlflow", version, about = "Steady swirling radial flows and circular transonic shocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Number of profile samples (overrides the config).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of shock positions in a sweep.
    #[arg(long)]
    pub points: Option<usize>,
    /// Output file (overrides the config; standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the flow regime and its diagnostics as JSON.
    Classify(CommonArgs),
    /// Write the sampled radial profile.
    Profile(CommonArgs),
    /// Print the shock solution as JSON (problems III and IV).
    Shock(CommonArgs),
    /// Tabulate exit pressure against shock position (problems III and IV).
    Sweep(CommonArgs),
    /// Print the characteristic radii and the admissible pressure interval.
    Limits(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Classify(a) | Command::Profile(a) | Command::Shock(a) | Command::Sweep(a) | Command::Limits(a) => a,
        }
    }
}

/// Runs one subcommand to completion.
pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let args = command.args();
    let cfg = RunConfig::from_path(&args.config)?;
    let opts = RunOptions {
        samples: args.samples,
        points: args.points,
        out: args.out.clone(),
    };
    match command {
        Command::Classify(_) => commands::classify(&cfg),
        Command::Profile(_) => commands::run_profile(&cfg, &opts),
        Command::Shock(_) => commands::run_shock(&cfg, &opts),
        Command::Sweep(_) => commands::run_sweep(&cfg, &opts),
        Command::Limits(_) => commands::run_limits(&cfg, &opts),
    }
}
