use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{requested} qubits requested, at most {max} supported")]
    TooManyQubits { requested: usize, max: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("channel is not trace preserving (max deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("channel is not completely positive (Choi eigenvalue {0:e})")]
    NotCompletelyPositive(f64),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("circuit contains a reset; lower it to a channel instead")]
    ResetInUnitary,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("parameter `{0}` is zero")]
    ZeroParameter(&'static str),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("duplicate noise scale {0}")]
    DuplicateScale(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid config at `{path}`: {message}")]
    InvalidConfig { path: String, message: String },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
