use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::map_slice;
use crate::pauli::{PauliAxis, PauliHamiltonian, PauliWord};
use crate::statevector::{sample_shots, StateVector};

/// Registers up to this size are measured over the complete Pauli basis.
pub const FULL_SUPPORT_MAX_QUBITS: usize = 6;

/// Pauli components `ε_j = ⟨ψ|P_j|ψ⟩` of one state and the energy they imply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Components {
    pub words: Vec<PauliWord>,
    pub values: Vec<f64>,
    /// `Σ_j α_j ε_j` over the measured Hamiltonian's terms.
    pub energy: f64,
}

impl Components {
    pub fn value(&self, word: &PauliWord) -> Option<f64> {
        self.words.iter().position(|w| w == word).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliWord, f64)> + '_ {
        self.words.iter().copied().zip(self.values.iter().copied())
    }
}

/// Words whose components feed deflation: the full basis for small registers,
/// otherwise the Hamiltonian's own words.
pub fn measurement_support(h: &PauliHamiltonian) -> Vec<PauliWord> {
    let n = h.num_qubits();
    if n <= FULL_SUPPORT_MAX_QUBITS {
        PauliWord::all(n).collect()
    } else {
        h.words().copied().collect()
    }
}

/// Measure every support word of `h` on `state`.
///
/// `shots == 0` gives exact expectations. Otherwise each word gets its own
/// batch of `shots` samples in its eigenbasis, drawn from a per-word stream
/// seeded by one value taken from `rng`.
pub fn measure_components<R: Rng + ?Sized>(
    h: &PauliHamiltonian,
    state: &StateVector,
    shots: u64,
    rng: &mut R,
) -> Result<Components> {
    if state.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch { expected: h.num_qubits(), found: state.num_qubits() });
    }
    let words = measurement_support(h);
    let values: Vec<f64> = if shots == 0 {
        map_slice(&words, |w| w.expectation(state.amplitudes()))
    } else {
        let batch_seed: u64 = rng.random();
        let indexed: Vec<(usize, PauliWord)> = words.iter().copied().enumerate().collect();
        map_slice(&indexed, |(i, w)| {
            let mut word_rng = crate::stream_rng(batch_seed, *i as u64);
            sampled_expectation(w, state, shots, &mut word_rng)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?
    };
    let comps = Components { words, values, energy: 0.0 };
    let energy = h.terms().map(|t| t.coefficient * comps.value(&t.word).unwrap_or(0.0)).sum();
    Ok(Components { energy, ..comps })
}

/// Estimate `⟨P⟩` from `shots` samples: rotate each support qubit into the
/// Z basis (H for X, S†·H for Y) and average the parity.
pub fn sampled_expectation<R: Rng + ?Sized>(word: &PauliWord, state: &StateVector, shots: u64, rng: &mut R) -> Result<f64> {
    if word.is_identity() {
        return Ok(1.0);
    }
    let mut rotated = state.clone();
    let mut support = Vec::new();
    for q in 0..word.num_qubits() {
        match word.axis(q) {
            PauliAxis::I => continue,
            PauliAxis::X => rotated.apply_hadamard(q)?,
            PauliAxis::Y => {
                rotated.apply_s_dagger(q)?;
                rotated.apply_hadamard(q)?;
            }
            PauliAxis::Z => {}
        }
        support.push(q);
    }
    let counts = sample_shots(&rotated, &support, shots, rng)?;
    let signed: i64 = counts
        .counts
        .iter()
        .map(|(bits, c)| if bits.matches('1').count() % 2 == 0 { *c as i64 } else { -(*c as i64) })
        .sum();
    Ok(signed as f64 / shots as f64)
}
