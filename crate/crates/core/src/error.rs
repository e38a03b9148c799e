use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid algebra: type {label} rank {rank}")]
    InvalidAlgebra { label: char, rank: usize },
    #[error("invalid Levi subset: {0}")]
    InvalidGamma(String),
    #[error("invalid linear form: {0}")]
    InvalidLinearForm(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Weyl group order exceeds bound {bound}")]
    WeylBoundExceeded { bound: usize },
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
