use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed coefficient {token:?}")]
    MalformedCoefficient { line: usize, token: String },
    #[error("line {line}: illegal Pauli axis {found:?} (expected one of I, X, Y, Z)")]
    IllegalAxis { line: usize, found: char },
    #[error("line {line}: expected `<coefficient> <axis string>`")]
    MalformedLine { line: usize },
    #[error("word length {found} does not match qubit count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("line {line}: word has {found} qubits, earlier words have {expected}")]
    InconsistentLength { line: usize, expected: usize, found: usize },
    #[error("Hamiltonian file contains no terms")]
    EmptyHamiltonian,
    #[error("{qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("ancilla branch {branch} out of range ({branches} branches)")]
    BranchOutOfRange { branch: usize, branches: usize },
    #[error("postselected branch vanished (probability {probability:e})")]
    PostselectionVanished { probability: f64 },
    #[error("state lies in the kernel of the applied operator (||U ψ|| = {norm:e})")]
    Kernel { norm: f64 },
    #[error("operator has no nonzero coefficient")]
    ZeroOperator,
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no accuracy within {k_max} iterations")]
    IterationLimit { k_max: usize },
    #[error("all {shots} shots failed postselection")]
    ShotStarvation { shots: u64 },
}
