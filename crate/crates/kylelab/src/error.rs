//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter violates its domain constraint.
    #[error("domain error: {field} {reason}")]
    Domain { field: &'static str, reason: String },

    /// A strategic-trader equilibrium was requested with zero risk aversion;
    /// the equilibrium slope collapses to zero and no valid quote exists.
    #[error("degenerate market: {0}")]
    DegenerateMarket(String),

    /// A closed-form expression left its numerical domain (e.g. a radicand
    /// went negative beyond tolerance). Indicates a bug or invalid input.
    #[error("numerical domain violation: {0}")]
    NumericalDomain(String),

    /// A time-dependent quantity was evaluated at or past the terminal
    /// singularity t = 1.
    #[error("singular time: {0}")]
    SingularTime(String),

    /// The quote admits unbounded trader profit (condition C1 violated).
    #[error("infinite profit: {0}")]
    InfiniteProfit(String),

    /// An exponential-moment estimator clamped too many paths to be trusted.
    #[error("heavy tail: {0}")]
    HeavyTail(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { field, reason: reason.into() }
    }
}
