use thiserror::Error;

/// Errors raised by the block-coherence library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |A - A^†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace {trace:.12} violates the {expected} constraint")]
    BadTrace { trace: f64, expected: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid projector set: {0}")]
    InvalidProjectors(String),

    #[error("block label {label} out of range for {blocks} blocks")]
    BadLabel { label: usize, blocks: usize },

    #[error("matrix is not unitary (max |UU^† - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("penalty method did not reach feasibility (min eigenvalue of B - rho = {min_eigenvalue:.3e})")]
    PenaltyNotConverged { min_eigenvalue: f64 },

    #[error("state trace {trace:.3e} is too small to renormalize")]
    VanishingTrace { trace: f64 },

    #[error("integration unstable at t = {t}: {reason}")]
    IntegratorUnstable { t: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
