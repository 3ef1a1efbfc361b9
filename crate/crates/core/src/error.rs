use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    QubitCap { requested: usize, cap: usize },

    #[error("a register needs at least one qubit")]
    EmptyRegister,

    #[error("qubit {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {0} appears more than once among a gate's targets and controls")]
    OverlappingQubits(usize),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("amplitude vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: qubit {qubit} carries more than one Pauli factor")]
    DuplicateQubit { line: usize, qubit: usize },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("operator is a multiple of the identity; nothing to block-encode")]
    IdentityOnly,

    #[error("LCU weights must be strictly positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("consecutive walk labels {from:#b} -> {to:#b} must differ by exactly one 0->1 flip")]
    InvalidWalk { from: usize, to: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs by {delta:e}")]
    NotSymmetric { row: usize, col: usize, delta: f64 },

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("post-selection probability {0:e} is below the degeneracy threshold")]
    DegeneratePostSelection(f64),
}
