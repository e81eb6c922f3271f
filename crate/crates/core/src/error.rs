use alloc::string::String;

/// Errors produced by the partitioned-optimization toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("inconsistent spectrum: {0}")]
    InconsistentSpectrum(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition infeasible: subnet of variable {variable} is disconnected")]
    PartitionInfeasible { variable: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("objective is not strongly convex: {0}")]
    NotStronglyConvex(String),
    #[error("local system of node {node} is singular")]
    LocalDegeneracy { node: usize },
    #[error("solver precondition violated: {0}")]
    Precondition(String),
    #[error("non-finite iterate at iteration {iteration}")]
    Divergence { iteration: usize },
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
}

pub type Result<T> = core::result::Result<T, Error>;
