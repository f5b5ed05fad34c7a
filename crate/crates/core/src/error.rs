//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::problem::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("sigma is not a permutation: {0}")]
    NonBijectiveSigma(String),

    #[error("cannot parse {0:?} as an exact rational")]
    ParseValue(String),

    #[error("arithmetic guard exceeded: {0}")]
    Overflow(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// `element` is 1-based, matching the external convention.
    #[error("element {element} has zero fractional part")]
    ZeroElement { element: usize },

    #[error("invalid problem: {0:?}")]
    InvalidProblem(Vec<Violation>),

    #[error("batch desirability {new} is not strictly below the last added ({last})")]
    BatchOrder { new: i64, last: i64 },

    /// `source` is 1-based.
    #[error("source arc of block {block} is already saturated")]
    SourceSaturated { block: usize },

    /// `element` is 1-based.
    #[error("no residual cycle through the middle arc of element {element}")]
    NoResidualCycle { element: usize },

    #[error("instance size {actual} exceeds the enumeration guard {limit}")]
    EnumerationGuard { actual: usize, limit: usize },

    /// `u`, `v` are 1-based vertex names.
    #[error("edge ({u}, {v}) lies on no perfect matching")]
    UnmatchableEdge { u: usize, v: usize },

    #[error("invalid random spec: {0}")]
    InvalidRandomSpec(String),

    #[error("rejection sampling failed after {attempts} attempts")]
    RejectionLimit { attempts: usize },

    #[error("internal error: {0}")]
    Internal(String),
}
