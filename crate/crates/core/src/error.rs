use thiserror::Error;

/// Errors produced while building or checking truncated operators and circuits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid truncation config: {0}")]
    InvalidConfig(String),

    #[error("boson index {index} out of range for {bosons} bosons")]
    BosonOutOfRange { index: usize, bosons: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{what}: {got} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("Pauli term {0} contains X or Y letters; only I/Z strings can be rotated directly")]
    NonDiagonalString(String),

    #[error("coefficient of {label} is not real (imaginary part {imag:e})")]
    ComplexCoefficient { label: String, imag: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("incompatible Hamiltonian: {0}")]
    IncompatibleSpec(String),

    #[error("Hamiltonian has no terms")]
    EmptyHamiltonian,

    #[error("amplitudes are not normalized (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
