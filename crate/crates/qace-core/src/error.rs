use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("observable is not dichotomic (eigenvalues {low}, {high})")]
    NonDichotomic { low: f64, high: f64 },

    #[error("distribution invariant violated: {0}")]
    DistributionInvariant(String),

    #[error("no rotation angle matches at the requested precision (best eta {eta}, residual {residual:e})")]
    EtaResidual { eta: f64, residual: f64 },

    #[error("counts column x={0} sums to zero")]
    ZeroCountColumn(usize),

    #[error("sigma must be positive")]
    ZeroSigma,

    #[error("need at least {min}, got {got}")]
    InsufficientData { min: usize, got: usize },

    #[error("linear program stalled: {0}")]
    LpStalled(String),
}

pub type Result<T> = std::result::Result<T, Error>;
