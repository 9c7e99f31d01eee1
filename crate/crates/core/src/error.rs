use thiserror::Error;

/// Errors raised by the algebraic, combinatorial and search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("expected {expected} matrices, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, &'static str),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("node budget exceeded after {expanded} expansions (budget {budget})")]
    BudgetExceeded { budget: u64, expanded: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
