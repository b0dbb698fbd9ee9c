use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto an exit category.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{0} is not a basis")]
    NotABasis(String),
    #[error("matroid has a coloop at element {}", .0 + 1)]
    HasColoop(usize),
    #[error("not a monomial curve: {0}")]
    NotACurve(String),
    #[error("matroid of the model is not uniform")]
    NotUniform,
    #[error("{0} is not a face of the polytope")]
    NotAFace(String),
    #[error("the all-ones vector is not in the row span")]
    NoAllOnes,
    #[error("column {} is zero", .0 + 1)]
    ZeroColumn(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid data vector: {0}")]
    InvalidData(String),
    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("normalized volume does not fit in 64 bits")]
    VolumeOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
