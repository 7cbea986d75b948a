use thiserror::Error;

/// Errors produced by the aggregation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed numerical input (empty vectors, non-finite entries, bound violations).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Mismatched dimensions between a design, targets, or weights.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration would visit more candidates than the configured budget.
    #[error("enumeration budget exceeded: {count} candidates > budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    /// A construction does not fit the requested size (e.g. too many disjoint blocks).
    #[error("capacity violated: {0}")]
    Capacity(String),

    /// Invalid or inconsistent configuration.
    #[error("invalid config: {0}")]
    Config(String),

    /// A user-supplied estimator failed inside a Monte Carlo evaluation.
    #[error("estimator failed on truth {truth}, replication {rep}: {source}")]
    EstimatorFailed {
        truth: usize,
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// CSV or numeric text that could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
