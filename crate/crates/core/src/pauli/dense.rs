use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hamiltonian::PauliHamiltonian;
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Largest register densified by default (4096 × 4096).
pub const DENSE_QUBIT_LIMIT: usize = 12;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Dense Hermitian matrix in the computational basis (qubit 0 = least-significant index bit).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    matrix: DMatrix<Complex64>,
}

impl DenseHermitian {
    /// Wrap a square matrix, rejecting it if `max |A − A†| > 1e-12 · max(1, max|A|)`.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let scale = matrix.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let deviation = (&matrix - matrix.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if deviation > HERMITIAN_TOLERANCE * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Unnormalized product `A·ψ`.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok((&self.matrix * v).iter().copied().collect())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let av = self.apply(state)?;
        Ok(state.amplitudes().iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum())
    }
}

/// Assemble `Σ_j α_j · P_j` densely.
pub fn to_dense(h: &PauliHamiltonian) -> Result<DenseHermitian> {
    to_dense_with_limit(h, DENSE_QUBIT_LIMIT)
}

pub fn to_dense_with_limit(h: &PauliHamiltonian, qubit_limit: usize) -> Result<DenseHermitian> {
    let n = h.num_qubits();
    if n > qubit_limit {
        return Err(Error::TooManyQubits { qubits: n, limit: qubit_limit });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for term in h.terms() {
        let x = term.word.x_mask() as usize;
        for col in 0..dim {
            m[(col ^ x, col)] += term.word.phase(col) * term.coefficient;
        }
    }
    Ok(DenseHermitian { matrix: m })
}

/// Ascending eigenvalues with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct ExactSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl ExactSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvector `k` (ascending order) as a normalized state.
    pub fn eigenstate(&self, k: usize) -> StateVector {
        let col: Vec<Complex64> = self.eigenvectors.column(k).iter().copied().collect();
        StateVector::from_amplitudes(col).expect("eigenvector columns are normalized")
    }

    /// Smallest distance from eigenvalue `k` to any other eigenvalue.
    pub fn gap(&self, k: usize) -> f64 {
        let e = self.eigenvalues[k];
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, v)| (v - e).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Full Hermitian eigendecomposition; the reference oracle for every spectral check.
pub fn exact_spectrum(a: &DenseHermitian) -> Result<ExactSpectrum> {
    let dim = a.dim();
    let eig = a.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(ExactSpectrum { eigenvalues, eigenvectors })
}

/// Validate then diagonalize a raw matrix.
pub fn exact_spectrum_of(matrix: DMatrix<Complex64>) -> Result<ExactSpectrum> {
    exact_spectrum(&DenseHermitian::from_matrix(matrix)?)
}
