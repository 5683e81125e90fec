//! Shared error type for everything downstream of the partition module.

use crate::partition::PartitionError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A context or parameter value fails its validity range
    /// (precision too low, |p| ≥ 1, a zero where a unit is required, ...).
    #[error("invalid parameter: {0}")]
    BadParameter(String),

    /// An evaluation hit a zero or non-finite denominator that the requested
    /// quantity genuinely depends on.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// Rejection sampling could not find a parameter point clearing the
    /// genericity margin within the attempt budget.
    #[error("genericity sampling failed: {0}")]
    GenericityFailure(String),

    /// A linear solve was rejected because the estimated condition number
    /// exceeds what the working precision can absorb.
    #[error("ill-conditioned linear system: condition estimate {cond:.3e} exceeds guard {guard:.3e}")]
    IllConditioned { cond: f64, guard: f64 },

    /// A linear system that should have had a unique solution (or a
    /// one-dimensional nullspace) did not.
    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),

    #[error(transparent)]
    Partition(#[from] PartitionError),

    /// An unknown identity-check id or bigrid kind was requested.
    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
