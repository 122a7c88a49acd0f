//! Command-line surface for the road-wheel engine.
//!
//! Subcommands: `road`, `wheel`, `trace`, `validate`, `crashes`, `render`,
//! `animate`. Data goes to files or stdout, diagnostics to stderr, and the
//! exit code classifies the outcome: 0 success, 1 validation failure,
//! 2 usage error, 3 numeric or I/O failure.

pub mod cli;
pub mod csv;
pub mod svg;

use roadwheel_core::Error as CoreError;
use thiserror::Error;

pub use cli::run_cli;

/// CLI-level errors, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the caller got wrong, 3 for numeric/runtime trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::BadParameter(_)
                | CoreError::OutOfDomain { .. }
                | CoreError::OutOfRange { .. }
                | CoreError::NonPositiveRadius { .. }
                | CoreError::RoadAboveAxis { .. } => 2,
                _ => 3,
            },
            CliError::Io(_) => 3,
        }
    }
}
