//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} out of range for n = {n} modes")]
    ModeOutOfRange { index: u32, n: u32 },

    #[error("mode index must be at least 1")]
    ZeroModeIndex,

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("frame rows are not orthonormal: max Gram deviation {max_dev:.3e} exceeds {tol:.1e}")]
    NonOrthonormalFrame { max_dev: f64, tol: f64 },

    #[error("species count S = {s} exceeds mode count n = {n}")]
    TooManySpecies { s: usize, n: usize },

    #[error("frame entries must be finite")]
    NonFiniteFrame,

    #[error("polynomial is not normal ordered")]
    NotNormalOrdered,

    #[error("operator maps state {state:?} outside the target basis")]
    LeavesBasis { state: Vec<u32> },

    #[error("occupancy total {got} does not match basis total {expected}")]
    TotalMismatch { expected: u32, got: u32 },

    #[error("coherent-state expansion requires an unconstrained basis")]
    ConstrainedBasis,

    #[error("matrix is not Hermitian: max deviation {max_dev:.3e} exceeds {tol:.1e}")]
    NonHermitian { max_dev: f64, tol: f64 },

    #[error("eigensolver residual {residual:.3e} exceeds bound {bound:.3e}")]
    EigenResidual { residual: f64, bound: f64 },

    #[error("{what} guard exceeded: {got} > {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("quantum numbers out of bounds: {context}")]
    QuantumNumberBounds { context: String },

    #[error("variational energy curve is not unimodal on the search interval")]
    NonUnimodal,

    #[error("state (v = {v}, l = {l}) not found in the N = {n} spectrum")]
    StateNotFound { n: u32, v: u32, l: i32 },

    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
