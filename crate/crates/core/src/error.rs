use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition {0}")]
    InvalidPartition(String),
    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: u32, right: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("lattice mismatch: 1/(2*{0}) vs 1/(2*{1})")]
    LatticeMismatch(u32, u32),
    #[error("exponent {0} is not on the lattice q^(1/(2*{1}))")]
    OffLattice(String, u32),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("intermediate cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("fermion window too small: {0}")]
    WindowOverflow(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
