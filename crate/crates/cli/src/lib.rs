//! Instance and trace file formats plus the command implementations
//! behind the `jumpsys` binary.

use thiserror::Error;

pub mod gen;
pub mod instance;
pub mod schema;
pub mod tracefile;

/// Command-level failures, split by exit code: property violations exit
/// with 1, malformed input with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Malformed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Malformed(_) => 2,
        }
    }
}
