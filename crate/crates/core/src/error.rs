use thiserror::Error;

/// Errors raised by the engine. Every variant names what failed so the CLI
/// can report the offending law, atom pair or input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HError {
    #[error("dimension comparison undecided at {bits} bits: {left} vs {right}")]
    IncomparableDimensions {
        left: String,
        right: String,
        bits: u32,
    },
    #[error("undefined sum: (+inf) + (-inf) at dimension {0}")]
    UndefinedSum(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("sequence does not converge: liminf {liminf} != limsup {limsup}")]
    DoesNotConverge { liminf: String, limsup: String },
    #[error("regions are not disjoint: {0}")]
    DisjointnessViolated(String),
    #[error("pointwise order not verified: {0}")]
    OrderNotVerified(String),
    #[error("chain is not monotone: {0}")]
    MonotonicityViolated(String),
    #[error("no limit found: {0}")]
    NoLimitFound(String),
    #[error("function is not in L_H: {0}")]
    NotInLH(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("set is unbounded")]
    Unbounded,
    #[error("input too large for enumeration: {0} elements")]
    TooLarge(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, HError>;

pub(crate) fn not_rep(msg: impl Into<String>) -> HError {
    HError::NotRepresentable(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> HError {
    HError::InvalidInput(msg.into())
}
