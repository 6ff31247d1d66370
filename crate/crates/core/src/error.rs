use thiserror::Error;

/// Errors produced by the series kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transform length {0} is not a power of two >= 2")]
    InvalidLength(usize),
    #[error("transform length {0} is not supported by this context")]
    UnsupportedLength(usize),
    #[error("input of {got} coefficients does not fit a transform of length {len}")]
    InputTooLong { got: usize, len: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("block index {index} out of range for {len} blocks")]
    BlockOutOfRange { index: usize, len: usize },
    #[error("transform of block {0} is already cached")]
    AlreadyCached(usize),
    #[error("transform of block {0} is not cached")]
    MissingCache(usize),
    #[error("block size mismatch: expected {expected}, got {got}")]
    BlockSizeMismatch { expected: usize, got: usize },
    #[error("series of {len} coefficients does not fit {nblocks} blocks of size {m}")]
    SeriesTooLong { len: usize, m: usize, nblocks: usize },
    #[error("block 0 has a nonzero constant term and cannot be integrated")]
    NonIntegrableConstant,
    #[error("constant term must be zero")]
    NonzeroConstantTerm,
    #[error("constant term must be one")]
    NotUnitConstantTerm,
    #[error("series is not invertible (constant term is zero)")]
    NotInvertible,
    #[error("order must be at least 1")]
    InvalidOrder,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
