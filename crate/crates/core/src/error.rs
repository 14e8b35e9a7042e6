use std::io;

use thiserror::Error;

/// Errors produced by table construction and the checks built on top of it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit must be at least 1")]
    ZeroLimit,

    #[error("sieve limit {limit} needs {required} bytes, above the memory ceiling of {ceiling} bytes")]
    MemoryCeiling { limit: u64, required: u64, ceiling: u64 },

    #[error("sieve limit {limit} exceeds the supported maximum {max}")]
    LimitTooLarge { limit: u64, max: u64 },

    #[error("{what} = {value} is outside the table range 1..={limit}")]
    OutOfRange { what: &'static str, value: u64, limit: u64 },

    #[error("sieve limit {have} is below the preimage bound {required} needed for x = {x}")]
    Incomplete { x: u64, required: u64, have: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("cache file is corrupt: {0}")]
    CorruptCache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
