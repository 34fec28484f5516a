//! Library side of the `granule` command-line tool.

pub mod app;
pub mod document;
pub mod dot;
pub mod report;

use thiserror::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("the realization is not reduced; pass --reduce to trim it first")]
    NotReduced,
    #[error("bad trajectory: {0}")]
    Trajectory(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::NotReduced => 3,
            CliError::Trajectory(_) => 4,
            CliError::Internal(_) => 1,
        }
    }

    pub(crate) fn from_core(e: granule_core::Error) -> Self {
        use granule_core::Error as E;
        match e {
            E::RequiresReduced => CliError::NotReduced,
            E::NotATrajectory => CliError::Trajectory(e.to_string()),
            E::InvariantViolation(_) => CliError::Internal(e.to_string()),
            other => CliError::Malformed(other.to_string()),
        }
    }
}
