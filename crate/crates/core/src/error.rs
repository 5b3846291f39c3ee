use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bitstring of odd length {0} cannot be filled with 2-bit units")]
    OddLength(usize),

    #[error("bitstring of length {0} is too short for a 64-bit tail window")]
    TooShortForTail(usize),

    #[error("key state {0} outside [1, 966]")]
    KeyOutOfRange(u64),

    #[error("invalid 128-bit hex value {0:?}: expected 32 hex digits")]
    InvalidHex(String),

    #[error("unknown render format {0:?} (expected hex, paper or binary)")]
    UnknownFormat(String),

    #[error("unknown algorithm {0:?} (expected md5 or dl128)")]
    UnknownAlgorithm(String),

    #[error("distinct-character percentage of empty text is undefined")]
    EmptyText,

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("enumeration of {requested} messages exceeds the guard of {limit}")]
    EnumerationTooLarge { requested: u128, limit: u128 },

    #[error("metric {metric} has invalid value {value}")]
    InvalidMetric { metric: String, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
