//! Library half of the `tempomotif` binary: benchmark orchestration
//! ([`run`]), synthetic dataset generation ([`synth`]), and report
//! comparison ([`compare`]). The binary is a thin argument-parsing shell
//! over these modules so integration tests can drive them directly.

pub mod compare;
pub mod run;
pub mod synth;

use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad parameters or an unusable combination of flags.
    #[error("usage: {0}")]
    Usage(String),
    /// The input data could not be read or did not make sense.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Data(_) => ExitCode::from(3),
        }
    }
}

impl From<tempomotif_core::Error> for CliError {
    fn from(e: tempomotif_core::Error) -> CliError {
        match e {
            tempomotif_core::Error::InvalidConfig { .. } => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
