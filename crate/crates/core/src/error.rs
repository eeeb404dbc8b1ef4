use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller supplied something outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: u64 },

    /// A divisor that should be integral had a fractional coefficient.
    #[error("non-integral divisor at level {level}: {detail}")]
    NonIntegral { level: u64, detail: String },

    #[error("rank {rank} where {expected} was required")]
    RankDeficient { rank: usize, expected: usize },

    /// Two independent computations disagreed.
    #[error("consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by bad arguments rather than failed checks.
    pub fn is_user_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::NotInvertible { .. })
    }
}
