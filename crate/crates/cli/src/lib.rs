//! Command implementations behind the `gentrib` binary.
//!
//! Every command produces an [`OutputRecord`] (the JSON form) alongside a
//! human-readable and a CSV rendering; [`Format`] picks which one is printed.

pub mod args;
pub mod bench;
pub mod commands;
pub mod output;

use thiserror::Error;

pub use args::{Cli, Command};
pub use output::{Format, OutputRecord, Rendered};

/// Exit status for a run where every identity held.
pub const EXIT_OK: u8 = 0;
/// An identity check or cross-check failed.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
/// The closed-form path was asked for parameters with non-positive delta.
pub const EXIT_DELTA: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    DeltaNotPositive(gentrib::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::DeltaNotPositive(_) => EXIT_DELTA,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

impl From<gentrib::Error> for CliError {
    fn from(e: gentrib::Error) -> Self {
        use gentrib::Error as E;
        match e {
            E::DeltaNotPositive { .. } => CliError::DeltaNotPositive(e),
            E::RootNotConverged { .. } => CliError::Failed(e.to_string()),
            E::InvalidRange { .. }
            | E::IndexTooSmall { .. }
            | E::InvalidModulus(_)
            | E::UnknownPreset(_)
            | E::Config(_) => CliError::Usage(e.to_string()),
        }
    }
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Term(a) => commands::term(a),
        Command::Roots(a) => commands::roots(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => bench::bench(a),
    }
}
