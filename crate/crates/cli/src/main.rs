//! `avqfi`: QFI and direction-averaged QFI of Gaussian probes from the
//! command line.

mod args;
mod commands;
mod input;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Relative deviation from the finite-difference rerun above which
/// `--oracle` turns the exit code into a warning.
pub const ORACLE_TOL: f64 = 1e-5;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_ORACLE: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<gauss_avqfi::Error> for CliError {
    fn from(e: gauss_avqfi::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

/// What a command reports back besides its output file.
#[derive(Debug, Default)]
pub struct Outcome {
    /// Largest relative deviation seen by `--oracle`, if it ran.
    pub oracle_deviation: Option<f64>,
    /// Set by `verify` when a check misses its tolerance.
    pub failed_checks: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Qfi(a) => commands::cmd_qfi(a, &cli.output),
        Command::Avqfi(a) => commands::cmd_avqfi(a, &cli.output),
        Command::Sample(a) => commands::cmd_sample(a, &cli.output),
        Command::Sweep(a) => commands::cmd_sweep(a, &cli.output),
        Command::Verify(a) => verify::cmd_verify(a, &cli.output),
    };
    match result {
        Ok(outcome) => {
            if let Some(dev) = outcome.oracle_deviation {
                eprintln!("oracle: max relative deviation {dev:.3e}");
                if dev > ORACLE_TOL || !dev.is_finite() {
                    eprintln!("warning: oracle deviation exceeds {ORACLE_TOL:e}");
                    return ExitCode::from(EXIT_ORACLE);
                }
            }
            if outcome.failed_checks > 0 {
                eprintln!("warning: {} verification check(s) failed", outcome.failed_checks);
                return ExitCode::from(EXIT_ORACLE);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Config(_) => ExitCode::from(EXIT_CONFIG),
                CliError::Numerical(_) => ExitCode::from(EXIT_NUMERICAL),
            }
        }
    }
}
