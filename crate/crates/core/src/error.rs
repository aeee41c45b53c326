use thiserror::Error;

use crate::literal::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("number of points r = {0} is outside 1..=8")]
    RankOutOfRange(i64),
    #[error("classes live on different surfaces (r = {left} vs r = {right})")]
    RankMismatch { left: usize, right: usize },
    #[error("expected {expected} coefficients b_i, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("type pattern has {support} points but the surface has only {rank}")]
    PatternTooLong { support: usize, rank: usize },
    #[error("k must be non-negative, got {0}")]
    NegativeK(i64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
