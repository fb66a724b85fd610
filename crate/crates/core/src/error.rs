use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("width {width} outside the supported range {min}..={max}")]
    WidthOutOfRange { width: usize, min: usize, max: usize },

    #[error("value {value:#x} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("table is flagged as a permutation but is not a bijection")]
    NotAPermutation,

    #[error("the two Simon base points must differ")]
    EqualBasePoints,

    #[error("prefix length {k} unsupported for {ell}-block messages (need 1 <= k <= ell - 2)")]
    UnsupportedPrefix { k: usize, ell: usize },

    #[error("round index {j} outside 1..={max}")]
    RoundOutOfRange { j: usize, max: usize },

    #[error("Simon's subroutine did not reach full rank for round {round} within {cap} samples")]
    SimonFailure { round: usize, cap: usize },

    #[error("could not find a distinct attacker prefix after {attempts} attempts")]
    PrefixSetupFailure { attempts: usize },

    #[error("sampled equations are inconsistent with the promised hidden shift")]
    InconsistentSystem,

    #[error("every input was queried without finding a collision")]
    NoCollision,

    #[error("oracle does not support this operation: {0}")]
    WrongOracleShape(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed truth table file: {0}")]
    Format(String),

    #[error("could not serialize report: {0}")]
    Report(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
