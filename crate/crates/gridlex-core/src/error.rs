use thiserror::Error;

/// Errors shared across the crate.
///
/// Best-effort extraction failures are *not* errors; they are reported
/// through [`crate::extract::Extraction::Failed`]. An `Error` means the
/// input violated a contract or a search ran out of budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dims must be nonempty with every size >= 1, got {0:?}")]
    BadDims(Vec<usize>),
    #[error("ranks must be a permutation of 0..{expected}, got {got} entries")]
    NonPermutationRanks { expected: usize, got: usize },
    #[error("invalid subgrid: {0}")]
    InvalidSubgrid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no monotone pattern applies at point {0:?}")]
    NotApplicable(Vec<usize>),
    #[error("array is not monotone with the given pattern")]
    PatternMismatch,
    #[error("array is not increasing")]
    NotIncreasing,
    #[error("input too small: {0}")]
    TooSmall(String),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("postcondition violated: {0}")]
    PostconditionFailed(String),
    #[error("search budget exceeded after {visited} candidates")]
    BudgetExceeded { visited: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
