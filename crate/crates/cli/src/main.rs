//! Command-line front end for constructing and verifying function pairs
//! whose spectrograms agree on prescribed sampling sets.
//!
//! Exit codes: 0 all checks pass, 1 a verification threshold was missed,
//! 2 configuration or hypothesis error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod png;
mod report;

use commands::CommonArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: malformed config, violated construction hypothesis,
    /// unusable arguments.
    Config(String),
    /// The pair was built but missed a verification threshold.
    Verification(String),
}

impl From<phasepair::Error> for CliError {
    fn from(e: phasepair::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "phasepair",
    about = "Builds pairs of functions with identical spectrogram samples on \
             lattices, verifies the guaranteed identities and exports \
             difference grids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pair for the configured scenario and write the report.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override of the relative equality tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Also render image exports where applicable.
        #[arg(long)]
        png: bool,
    },
    /// Build a pair and run the verification battery; exit 1 on failure.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        png: bool,
    },
    /// Export the squared-spectrogram difference over a frequency grid.
    Grid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        png: bool,
    },
    /// Run a built-in configuration and assert its thresholds.
    Repro {
        /// One of: example-i, example-ii, pauli, real-sign, rational.
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        png: bool,
    },
    /// Print density, reciprocal and classification of a lattice.
    LatticeInfo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { config, out, tol, png } => commands::cmd_build(&CommonArgs {
            config,
            out,
            tol,
            png,
        }),
        Command::Verify { config, out, tol, png } => commands::cmd_verify(&CommonArgs {
            config,
            out,
            tol,
            png,
        }),
        Command::Grid { config, out, tol, png } => commands::cmd_grid(&CommonArgs {
            config,
            out,
            tol,
            png,
        }),
        Command::Repro { name, out, tol, png } => commands::cmd_repro(&name, &out, tol, png),
        Command::LatticeInfo { config, out } => {
            commands::cmd_lattice_info(&config, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
