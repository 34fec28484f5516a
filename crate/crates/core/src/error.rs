use thiserror::Error;

/// Errors raised by the analysis toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup of the given group: {0}")]
    NotASubgroupOf(String),

    #[error("ambient groups differ: {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("coordinate {index} out of range for a group with {len} coordinates")]
    CoordinateOutOfRange { index: usize, len: usize },

    #[error("invalid realization: {0}")]
    InvalidRealization(String),

    #[error("a level-0 fragment has no covered fragments")]
    UndefinedBelow,

    #[error("the realization must be reduced (state-trim and branch-trim)")]
    RequiresReduced,

    #[error("element is not a trajectory of the behavior")]
    NotATrajectory,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
