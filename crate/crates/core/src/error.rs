//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by simulation, training, and data-preparation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubit(s)")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate targets must be distinct (got qubit {0} twice)")]
    DuplicateTargets(usize),

    #[error("rotation angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("{requested} qubits requested, simulator supports at most {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("qubit count must be at least 1")]
    ZeroQubits,

    #[error("state has {got} amplitudes, expected {expected}")]
    BadAmplitudeCount { expected: usize, got: usize },

    #[error("state norm is {0}, expected 1 within 1e-12")]
    NotNormalized(f64),

    #[error("operands act on different qubit counts: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}:{line}: {reason}")]
    DataFormat { path: String, line: u64, reason: String },

    #[error("failed to read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn data(path: impl Into<String>, line: u64, reason: impl Into<String>) -> Self {
        Error::DataFormat { path: path.into(), line, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
