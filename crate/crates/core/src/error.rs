use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("{value} has no square root modulo {p}")]
    NoSquareRoot { value: u64, p: u64 },

    #[error("no Newton polygon vertex separates slopes at {0}")]
    FactorizationUndefined(String),

    #[error("class set search incomplete: found {found} classes, mass {reached} of {target}")]
    IncompleteClassSet {
        found: usize,
        reached: String,
        target: String,
    },

    #[error("prime {0} ramifies in the algebra")]
    RamifiedPlace(u64),

    #[error("matrix is not in the monoid M_{alpha}: {reason}")]
    MonoidMembership { alpha: u32, reason: String },

    #[error("level error: {0}")]
    Level(String),

    #[error("internal error: {0}")]
    Internal(String),
}
