use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::error::{Error, Result};

/// Measured bitstring → count.
///
/// Bitstrings list the measured qubits in reverse order: the rightmost
/// character is the first qubit passed to [`sample_shots`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        self.count(outcome) as f64 / self.shots as f64
    }
}

/// Exact marginal distribution over `qubits`, indexed by the packed outcome
/// (bit i = value of `qubits[i]`).
pub fn marginal(state: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    if qubits.is_empty() {
        return Err(Error::InvalidArgument("no qubits to measure".into()));
    }
    state.check_targets(qubits)?;
    let mut dist = vec![0.0; 1 << qubits.len()];
    for (k, a) in state.amplitudes().iter().enumerate() {
        let mut idx = 0;
        for (i, q) in qubits.iter().enumerate() {
            idx |= ((k >> q) & 1) << i;
        }
        dist[idx] += a.norm_sqr();
    }
    Ok(dist)
}

/// Draw `shots` joint measurements of `qubits`.
///
/// The multinomial draw is a chain of binomials over outcomes in index order,
/// so a fixed generator state gives a fixed result.
pub fn sample_shots<R: Rng + ?Sized>(state: &StateVector, qubits: &[usize], shots: u64, rng: &mut R) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = marginal(state, qubits)?;
    let counts = multinomial(&dist, shots, rng);
    let width = qubits.len();
    let counts = counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(idx, c)| (format!("{idx:0width$b}"), c))
        .collect();
    Ok(ShotCounts { shots, counts })
}

/// Multinomial counts for (possibly unnormalized) weights `p`.
pub fn multinomial<R: Rng + ?Sized>(p: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut remaining_mass: f64 = p.iter().sum();
    let mut remaining = shots;
    let mut out = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == p.len() {
            out[i] = remaining;
            break;
        }
        let frac = if remaining_mass > 0.0 { (pi / remaining_mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = Binomial::new(remaining, frac).expect("probability in [0, 1]").sample(rng);
        out[i] = k;
        remaining -= k;
        remaining_mass -= pi;
    }
    out
}
