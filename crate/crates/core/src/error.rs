use thiserror::Error;

use crate::Multiplier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is outside the sieved range (limit {limit})")]
    OutOfCoverage { value: u128, limit: u64 },

    #[error("sieving to {limit} needs about {required} bytes, over the cap of {cap} bytes")]
    Resource { limit: u64, required: u64, cap: u64 },

    #[error("only {certified} of {requested} terms could be certified within the sieved range")]
    Incomplete { certified: usize, requested: usize },

    #[error("chain stalls at {term}: no prime in ({term}, {m}*{term})")]
    ChainStall { term: u64, m: Multiplier },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
