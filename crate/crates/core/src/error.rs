use thiserror::Error;

use crate::sequence::Symbol;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} is outside the alphabet 1..={q}")]
    InvalidSymbol { symbol: Symbol, q: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("oligo is not a subsequence of the alternating prefix A_{q}[{cycles}]")]
    NotAMember { q: u32, cycles: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("corrupt block: {0}")]
    CorruptBlock(String),

    #[error("corrupt stream: {0}")]
    CorruptStream(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by malformed encoded data rather than bad parameters.
    pub fn is_corruption(&self) -> bool {
        matches!(self, Error::CorruptBlock(_) | Error::CorruptStream(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
