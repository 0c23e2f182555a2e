use thiserror::Error;

/// Errors raised by the algebra, oracle and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A value lies outside the domain of a function (zero coordinate, pole, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An identity that must hold by construction failed. Always a bug, never bad input.
    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("degenerate parameter point: {0}; choose a different parameter point")]
    DegenerateParameters(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("truncation error: {0}; increase the Fock truncation K")]
    Truncation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
