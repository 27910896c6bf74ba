use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M†| entry = {max_dev:e} exceeds tol {tol:e}")]
    NotHermitian { max_dev: f64, tol: f64 },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("subsystem dims {dims:?} do not multiply to matrix dimension {dim}")]
    BadSubsystems { dims: Vec<usize>, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid dimension: {0}")]
    BadDimension(usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),
    #[error("basis is not orthonormal: max deviation {0:e}")]
    NotOrthonormal(f64),
    #[error("operator is not unitary: max |U†U - I| = {0:e}")]
    NotUnitary(f64),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("state is not pure: largest eigenvalue {0}")]
    NotPure(f64),
    #[error("invalid Renyi order alpha = {0}")]
    BadAlpha(f64),
    #[error("MCDC spec invalid: underlying map fails the DIO check (residual {0:e})")]
    SpecInvalid(f64),
    #[error("MCDC filler invalid: covariance residual {0:e}")]
    FillerInvalid(f64),
    #[error("channel sampling failed to converge after {0} iterations")]
    SamplingFailed(usize),
    #[error("candidate pool is empty")]
    EmptyPool,
    #[error("enumeration too large: {size} sequences exceeds guard {guard}")]
    TooLarge { size: u128, guard: u128 },
    #[error("operator inequality violated: {0}")]
    DomainViolation(String),
    #[error("unitary completion failed: {0}")]
    CompletionFailed(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
