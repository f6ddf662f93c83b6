//! Batch front-end: configure an experiment, run it, and persist
//! manifest + plot-ready records under one directory per run.

mod commands;
mod manifest;
mod resolve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Failure carrying its process exit code: 1 for identity violations and
/// acceptance failures, 2 for configuration problems.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn violation(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<blip::Error> for Failure {
    fn from(e: blip::Error) -> Self {
        Failure::config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::config(format!("io error: {e}"))
    }
}

pub type CliResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(name = "blip", version, about = "Lattice path and particle process experiments")]
struct Cli {
    /// TOML config file; command-line flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory [default: runs/<subcommand>]
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one DP table on a seeded field and dump it as CSV
    Simulate(commands::SimulateArgs),
    /// Law-of-large-numbers run for the limit shape
    Shape(commands::ShapeArgs),
    /// Soft-edge scaling run; the regime follows the exponent a
    SoftEdge(commands::SoftEdgeArgs),
    /// Hard-edge first-order law for thin rectangles
    HardEdge(commands::HardEdgeArgs),
    /// Exact identity checks over batches of random fields
    Identities(commands::IdentitiesArgs),
    /// Evolve one particle process and dump its trajectory or event log
    Processes(commands::ProcessesArgs),
    /// Compare the two Monte Carlo representations of one exceedance event
    Crosscheck(commands::CrosscheckArgs),
}

fn main() -> ExitCode {
    // the environment variable controls only the worker pool size;
    // results are independent of it by the ordered-fold contract
    if let Ok(workers) = std::env::var("BLIP_WORKERS") {
        match workers.parse::<usize>() {
            Ok(w) if w >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
            }
            _ => {
                eprintln!("error: BLIP_WORKERS must be a positive integer, got `{workers}`");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let file = match resolve::ConfigFile::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    let result = match cli.cmd {
        Cmd::Simulate(args) => commands::simulate(args, &file, cli.out),
        Cmd::Shape(args) => commands::shape(args, &file, cli.out),
        Cmd::SoftEdge(args) => commands::soft_edge(args, &file, cli.out),
        Cmd::HardEdge(args) => commands::hard_edge(args, &file, cli.out),
        Cmd::Identities(args) => commands::identities(args, &file, cli.out),
        Cmd::Processes(args) => commands::processes(args, &file, cli.out),
        Cmd::Crosscheck(args) => commands::crosscheck(args, &file, cli.out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
