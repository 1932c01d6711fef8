//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("mismatched weight systems {0} and {1}")]
    WeightMismatch(String, String),
    #[error("not in the image of theta: {0}")]
    NotInImage(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("unknown Hom dimension between {0} and {1}")]
    UnknownHom(String, String),
    #[error("module relation check failed: {0}")]
    Relation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
