//! Pauli-word algebra, Hamiltonians, and the dense diagonalization oracle.

mod compiled;
mod dense;
mod hamiltonian;
mod resources;
mod word;

pub use compiled::CompiledOperator;
pub use dense::{exact_spectrum, exact_spectrum_of, to_dense, to_dense_with_limit, DenseHermitian, ExactSpectrum, DENSE_QUBIT_LIMIT};
pub use hamiltonian::{word_expectation, PauliHamiltonian, WeightedTerm, DEFAULT_BIAS_MARGIN};
pub use resources::{estimate_resources, ResourceEstimate};
pub use word::{PauliAxis, PauliWord, MAX_WORD_QUBITS};
