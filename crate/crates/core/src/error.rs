use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {norm:e} is below the zero threshold")]
    ZeroVector { norm: f64 },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    BadSubsystem { index: usize, count: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimTooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("measurement basis is not orthonormal or does not span the subsystem: {0}")]
    BadBasis(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("probability vector sums to {0}, not 1")]
    NotNormalized(f64),
    #[error("argument {value} outside the validity regime {regime}")]
    OutOfRegime { value: f64, regime: &'static str },
    #[error("argument {value} out of range: {range}")]
    OutOfRange { value: f64, range: &'static str },
    #[error("map cannot amplify separations (magnification {0})")]
    NoAmplification(f64),
    #[error("iteration cap {0} reached")]
    IterationCap(usize),
    #[error("malformed algorithm trace: {0}")]
    MalformedTrace(String),
    #[error("capacity must be positive")]
    ZeroCapacity,
    #[error("Born-rule deviation must be nonzero")]
    ZeroDelta,
    #[error("subsystem {0} is not a qubit")]
    NotAQubit(usize),
    #[error("postselection target has zero overlap with the state")]
    ZeroOverlap,
    #[error("invalid search instance: {0}")]
    BadInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
