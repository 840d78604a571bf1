use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Layered hardware-efficient circuit: per layer, `Ry` then `Rz` on every
/// qubit, then CZ on each neighbouring pair `(q, q+1)`.
///
/// Parameters are laid out layer-major, two per qubit: `[ry, rz]` for qubit 0,
/// then qubit 1, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardwareEfficientAnsatz {
    pub qubits: usize,
    pub depth: usize,
}

pub const DEFAULT_DEPTH: usize = 3;

impl HardwareEfficientAnsatz {
    pub fn new(qubits: usize, depth: usize) -> Self {
        Self { qubits, depth }
    }

    pub fn num_params(&self) -> usize {
        2 * self.qubits * self.depth
    }

    /// `A(params)|initial⟩`.
    pub fn prepare(&self, params: &[f64], initial: &StateVector) -> Result<StateVector> {
        if params.len() != self.num_params() {
            return Err(Error::LengthMismatch { expected: self.num_params(), found: params.len() });
        }
        if initial.num_qubits() != self.qubits {
            return Err(Error::DimensionMismatch { expected: self.qubits, found: initial.num_qubits() });
        }
        let mut state = initial.clone();
        for layer in params.chunks(2 * self.qubits) {
            for (q, angles) in layer.chunks(2).enumerate() {
                state.apply_ry(q, angles[0])?;
                state.apply_rz(q, angles[1])?;
            }
            for q in 1..self.qubits {
                state.apply_cz(q - 1, q)?;
            }
        }
        Ok(state)
    }
}
