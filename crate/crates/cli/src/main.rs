//! `pkslab`: constants, simulations and sweeps from the command line.
//!
//! Exit codes: 0 success, 1 failed audit or unwritable output, 2 invalid
//! configuration, 3 blow-up detected, 4 numerical failure.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "pkslab", version, about = "Shear suppression of chemotactic blow-up: constants and simulations")]
struct Cli {
    /// Repeat for more log output.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Explicit constants, rate factors and amplitude thresholds.
    Constants(ConstantsArgs),
    /// Run one simulation from a TOML configuration.
    Solve(SolveArgs),
    /// Compare a linear run against the closed-form propagator.
    Oracle(OracleArgs),
    /// Y and X-piece norms of a checkpoint.
    Norms(NormsArgs),
    /// Amplitude sweep from a JSON plan.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Use the reference parameters; individual overrides are rejected.
    #[arg(long, conflicts_with_all = ["m", "eps", "a", "xi", "theta1", "theta2", "params"])]
    pub paper_defaults: bool,
    /// Check every published inequality; exit 1 if one fails.
    #[arg(long)]
    pub verify_paper: bool,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub coupled: bool,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub theta1: Option<f64>,
    #[arg(long)]
    pub theta2: Option<f64>,
    /// `paper-split` or `sharp`.
    #[arg(long, default_value = "paper-split")]
    pub mode: String,
    /// TOML file with the six norm parameters.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// JSON file with initial norms, for the bootstrap sizes.
    #[arg(long)]
    pub norms: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub print_defaults: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// TOML run configuration (`[sim]`, `[init]`, `[output]`).
    #[arg(long, required_unless_present = "print_defaults")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "run")]
    pub out: PathBuf,
    #[arg(long)]
    pub print_defaults: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Lattice index of the x wavenumber on a 2π box.
    #[arg(long, default_value_t = 1)]
    pub k: i64,
    #[arg(long = "A", default_value_t = 100.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    /// PKSC checkpoint; a `<file>.json` sidecar supplies the strain.
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long = "A", default_value_t = 100.0)]
    pub amplitude: f64,
    /// Rescaled time entering the exponential weight.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep plan.
    #[arg(long, required_unless_present = "print_defaults")]
    pub plan: Option<PathBuf>,
    #[arg(long, default_value = "sweep")]
    pub out: PathBuf,
    /// Concurrent runs (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub print_defaults: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Constants(a) => commands::constants(a),
        Command::Solve(a) => commands::solve(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Norms(a) => commands::norms(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
