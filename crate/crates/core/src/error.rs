use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid number of atoms: {0}")]
    InvalidAtomNumber(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("negative probability {0:e}")]
    NegativeProbability(f64),

    #[error("value {value} out of range 0..={max}")]
    OutOfRange { value: usize, max: usize },

    #[error("empty trajectory ensemble")]
    EmptyEnsemble,

    #[error("degenerate estimator bias factor {0:e}")]
    DegenerateBias(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
