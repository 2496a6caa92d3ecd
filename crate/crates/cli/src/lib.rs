//! Command-line front end for the poptrack controllers: scenario files,
//! simulation, comparison and latency benchmarking with CSV/JSON/SVG output.

pub mod commands;
pub mod error;
pub mod scenario;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "poptrack",
    version,
    about = "Path-tracking controller benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one controller and write run.csv, metrics.json and trajectory.svg.
    Simulate {
        scenario: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Record zero latency so output files are reproducible byte for byte.
        #[arg(long)]
        deterministic: bool,
    },
    /// Run every listed controller on the same track and rank them.
    Compare {
        scenario: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        deterministic: bool,
    },
    /// Report lateral-controller latency statistics.
    Bench {
        scenario: PathBuf,
        #[arg(short = 'n', long, default_value_t = 10,
              value_parser = clap::value_parser!(u64).range(1..))]
        iterations: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a generated track as an x,y CSV. SPEC is `benchmark`, inline
    /// JSON or a JSON file of the form {"generator": {...}, "spacing": 1.0}.
    GenTrack {
        spec: String,
        #[arg(short, long)]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            deterministic,
        } => commands::simulate(&scenario, out.as_deref(), deterministic),
        Command::Compare {
            scenario,
            out,
            deterministic,
        } => commands::compare(&scenario, out.as_deref(), deterministic),
        Command::Bench {
            scenario,
            iterations,
            out,
        } => commands::bench(&scenario, iterations as usize, out.as_deref()),
        Command::GenTrack { spec, out } => commands::gen_track(&spec, &out),
    }
}
