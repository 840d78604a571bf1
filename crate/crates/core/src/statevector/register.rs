use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{permute_with_phase, StateVector};
use crate::error::{Error, Result};
use crate::pauli::PauliWord;

/// Work register in the low qubits, ancilla register in the high qubits.
///
/// Amplitudes with ancilla value `j` form the contiguous block
/// `j·2^work .. (j+1)·2^work`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub work: usize,
    pub ancilla: usize,
}

impl RegisterLayout {
    pub fn new(work: usize, ancilla: usize) -> Self {
        Self { work, ancilla }
    }

    pub fn total(&self) -> usize {
        self.work + self.ancilla
    }

    pub fn branches(&self) -> usize {
        1 << self.ancilla
    }

    pub fn work_dim(&self) -> usize {
        1 << self.work
    }

    /// Register indices of the ancilla qubits.
    pub fn ancilla_qubits(&self) -> Vec<usize> {
        (self.work..self.total()).collect()
    }

    /// Amplitude block on which the ancilla reads `branch`.
    pub fn block(&self, branch: usize) -> Range<usize> {
        let w = self.work_dim();
        branch * w..(branch + 1) * w
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.total() {
            return Err(Error::DimensionMismatch { expected: self.total(), found: state.num_qubits() });
        }
        Ok(())
    }

    fn check_branch(&self, branch: usize) -> Result<()> {
        if branch >= self.branches() {
            return Err(Error::BranchOutOfRange { branch, branches: self.branches() });
        }
        Ok(())
    }

    /// Ancilla bitstring (Kronecker order) to branch index.
    pub fn parse_pattern(&self, pattern: &str) -> Result<usize> {
        if pattern.len() != self.ancilla {
            return Err(Error::LengthMismatch { expected: self.ancilla, found: pattern.len() });
        }
        if pattern.is_empty() {
            return Ok(0);
        }
        usize::from_str_radix(pattern, 2).map_err(|_| Error::InvalidArgument(format!("bad ancilla pattern {pattern:?}")))
    }
}

impl StateVector {
    /// Controlled word `|branch⟩⟨branch| ⊗ P`: only the matching block changes.
    pub fn apply_selected_word(&mut self, layout: &RegisterLayout, branch: usize, word: &PauliWord) -> Result<()> {
        layout.check(self)?;
        layout.check_branch(branch)?;
        if word.num_qubits() != layout.work {
            return Err(Error::LengthMismatch { expected: layout.work, found: word.num_qubits() });
        }
        permute_with_phase(&mut self.amps[layout.block(branch)], word);
        Ok(())
    }

    /// Condition on the ancilla reading `pattern`; returns the renormalized work
    /// state and the probability of that outcome.
    pub fn postselect(&self, layout: &RegisterLayout, pattern: &str) -> Result<(StateVector, f64)> {
        self.postselect_branch(layout, layout.parse_pattern(pattern)?)
    }

    pub fn postselect_branch(&self, layout: &RegisterLayout, branch: usize) -> Result<(StateVector, f64)> {
        layout.check(self)?;
        layout.check_branch(branch)?;
        let block = &self.amps[layout.block(branch)];
        let probability: f64 = block.iter().map(|a| a.norm_sqr()).sum();
        if probability < 1e-14 {
            return Err(Error::PostselectionVanished { probability });
        }
        let inv = 1.0 / probability.sqrt();
        let amps = block.iter().map(|a| a * inv).collect();
        Ok((StateVector { qubits: layout.work, amps }, probability))
    }
}
