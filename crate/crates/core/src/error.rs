use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spin index {index} out of range for a {num_spins}-spin system")]
    SpinIndex { index: usize, num_spins: usize },

    #[error("unsupported number of spins: {0} (expected 1..=6)")]
    NumSpins(usize),

    #[error("pair indices must be distinct, got ({0}, {0})")]
    DegeneratePair(usize),

    #[error("states are not orthogonal: |<a|b>| = {0:e}")]
    NotOrthogonal(f64),

    #[error("state vector is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian: max |M - M^dag| = {0:e}")]
    NotHermitian(f64),

    #[error("matrix is not unitary: max |U^dag U - 1| = {0:e}")]
    NotUnitary(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unknown channel '{0}'")]
    UnknownChannel(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("missing coupling '{0}'")]
    MissingCoupling(&'static str),

    #[error("transfer amplitude has a non-negligible imaginary part ({0:e})")]
    NonReal(f64),

    #[error("eigendecomposition failed to converge")]
    Eigen,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
