use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("gate acts on qubit {0} more than once")]
    RepeatedQubit(usize),

    #[error("{0} qubits requested; dense simulation is capped at {max}", max = crate::statevector::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("input is empty")]
    Empty,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("entry {value} at index {index} would overflow the exponential map")]
    Overflow { index: usize, value: f64 },

    #[error("simplex entry {value} at index {index} is not strictly positive")]
    NonPositive { index: usize, value: f64 },

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probability vector is identically zero")]
    AllZero,

    #[error("entry {value} at index {index} lies outside (0, 2π]")]
    OutsideIqpDomain { index: usize, value: f64 },

    #[error("invalid encoding scheme: {0}")]
    InvalidScheme(String),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("fidelity {0} lies outside [0, 1]")]
    InvalidFidelity(f64),

    #[error("dimension {k} out of range (complex has max dimension {max_dim})")]
    DimensionOutOfRange { k: usize, max_dim: usize },

    #[error("{count} simplices in dimension {k} exceed the dense Laplacian limit of {limit}")]
    ComplexTooLarge { k: usize, count: usize, limit: usize },

    #[error("epsilon {epsilon} lies beyond the computed filtration range {max_eps}")]
    EpsilonBeyondRange { epsilon: f64, max_eps: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ComplexTooLarge { .. } | Error::Eigensolver(_) | Error::NotNormalized(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
