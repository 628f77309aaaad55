use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse exact scalar from {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not {0}")]
    NotSymmetric(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("characteristic polynomial has a non-cyclotomic factor of degree {degree} (searched orders up to {bound})")]
    NotQuasiUnipotent { degree: usize, bound: u32 },
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("operator does not preserve the filtration: {0}")]
    NPreservesWViolated(String),
    #[error("filtration is not adapted to the operator: {0}")]
    FiltrationNotAdapted(String),
    #[error("polarization weight {polarization} does not match structure weight {structure}")]
    WeightMismatch { polarization: i64, structure: i64 },
    #[error("Gram matrix is not hermitian up to a constant: {0}")]
    NonHermitianGram(String),
    #[error("invalid split mixed Hodge structure: {0}")]
    InvalidStructure(String),
    #[error("1 - uv or 1 - vu is not invertible")]
    InvertibilityFailed,
    #[error("monodromy is not quasi-unipotent after eigenvalue splitting")]
    NotUnipotent,
    #[error("elements do not share index data: {0}")]
    IndexMismatch(String),
    #[error("truncation p = {p} is too short for nilpotency index {index}")]
    TruncationTooShort { p: usize, index: usize },
    #[error("r = {0} is outside (-1, 0)")]
    ROutOfRange(String),
    #[error("nilpotent operators do not commute: {0}")]
    NonCommutingNilpotents(String),
    #[error("weight filtration hypothesis violated: {0}")]
    HypothesisWViolated(String),
    #[error("relations beyond total degree {bound} are needed")]
    DegreeBoundTooSmall { bound: usize },
    #[error("bounded integral directions have odd rank {0}")]
    OddBoundedRank(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}
