use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::word::{PauliAxis, PauliWord};
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Default safety margin added to the coefficient bound in [`PauliHamiltonian::default_bias`].
pub const DEFAULT_BIAS_MARGIN: f64 = 0.1;

/// One `coefficient · word` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub coefficient: f64,
    pub word: PauliWord,
}

/// Real-weighted sum of distinct Pauli words on a fixed number of qubits.
///
/// Terms keep the order in which their words first appeared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianRepr", into = "HamiltonianRepr")]
pub struct PauliHamiltonian {
    qubits: usize,
    terms: IndexMap<PauliWord, f64>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianRepr {
    qubits: usize,
    terms: Vec<WeightedTerm>,
}

impl From<PauliHamiltonian> for HamiltonianRepr {
    fn from(h: PauliHamiltonian) -> Self {
        HamiltonianRepr { qubits: h.qubits, terms: h.terms().collect() }
    }
}

impl TryFrom<HamiltonianRepr> for PauliHamiltonian {
    type Error = Error;

    fn try_from(repr: HamiltonianRepr) -> Result<Self> {
        PauliHamiltonian::from_terms(repr.qubits, repr.terms)
    }
}

impl PauliHamiltonian {
    /// The zero operator on `qubits` qubits.
    pub fn new(qubits: usize) -> Self {
        Self { qubits, terms: IndexMap::new() }
    }

    pub fn from_terms(qubits: usize, terms: impl IntoIterator<Item = WeightedTerm>) -> Result<Self> {
        let mut h = Self::new(qubits);
        for t in terms {
            h.add_term(t.word, t.coefficient)?;
        }
        Ok(h)
    }

    /// Convenience constructor from `(coefficient, axis string)` pairs.
    pub fn from_strs(pairs: &[(f64, &str)]) -> Result<Self> {
        let first = pairs.first().ok_or(Error::EmptyHamiltonian)?;
        let qubits = first.1.trim().len();
        let mut h = Self::new(qubits);
        for (coefficient, word) in pairs {
            h.add_term(word.parse()?, *coefficient)?;
        }
        Ok(h)
    }

    /// Add `coefficient · word`, merging into an existing term with the same word.
    pub fn add_term(&mut self, word: PauliWord, coefficient: f64) -> Result<()> {
        if word.num_qubits() != self.qubits {
            return Err(Error::LengthMismatch { expected: self.qubits, found: word.num_qubits() });
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {coefficient}")));
        }
        *self.terms.entry(word).or_insert(0.0) += coefficient;
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    /// Number of distinct words, L.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = WeightedTerm> + '_ {
        self.terms.iter().map(|(w, c)| WeightedTerm { coefficient: *c, word: *w })
    }

    pub fn words(&self) -> impl Iterator<Item = &PauliWord> + '_ {
        self.terms.keys()
    }

    pub fn coefficient(&self, word: &PauliWord) -> f64 {
        self.terms.get(word).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, word: &PauliWord) -> bool {
        self.terms.contains_key(word)
    }

    pub(crate) fn coefficient_mut(&mut self, word: &PauliWord) -> Option<&mut f64> {
        self.terms.get_mut(word)
    }

    pub fn identity_coefficient(&self) -> f64 {
        self.coefficient(&PauliWord::identity(self.qubits))
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `Σ |α_j|` over the non-identity terms; half-width of the spectral interval.
    pub fn nonidentity_abs_sum(&self) -> f64 {
        self.terms().filter(|t| !t.word.is_identity()).map(|t| t.coefficient.abs()).sum()
    }

    /// Upper bound on the width of the spectrum, `2 Σ_{non-identity} |α_j|`.
    pub fn spectral_range_bound(&self) -> f64 {
        2.0 * self.nonidentity_abs_sum()
    }

    /// `H − λ0·I`: only the identity coefficient changes; an identity term is
    /// inserted at the front if absent.
    pub fn shift(&self, bias: f64) -> Self {
        let mut out = self.clone();
        if bias == 0.0 {
            return out;
        }
        let id = PauliWord::identity(self.qubits);
        match out.terms.get_mut(&id) {
            Some(c) => *c -= bias,
            None => {
                out.terms.shift_insert(0, id, -bias);
            }
        }
        out
    }

    /// `f · H`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= factor);
        out
    }

    /// Bias λ0 that makes the ground state the dominant eigenpair of `H − λ0·I`.
    ///
    /// `α_I + Σ|α_j|` bounds every eigenvalue from above. The result is that bound
    /// plus `margin`, or `margin` alone when the sum is not positive, so it always
    /// exceeds both zero and the largest eigenvalue.
    pub fn default_bias(&self, margin: f64) -> f64 {
        let bound = self.identity_coefficient() + self.nonidentity_abs_sum();
        if bound + margin > 0.0 {
            bound + margin
        } else {
            margin
        }
    }

    /// Per-qubit Z offsets `δ_i = η · u_i · max|α_j|` with `u_i ~ U[−1, 1]`, drawn in qubit order.
    pub fn noise_offsets<R: Rng + ?Sized>(&self, intensity: f64, scale: f64, rng: &mut R) -> Result<Vec<f64>> {
        if !(intensity >= 0.0) {
            return Err(Error::InvalidArgument(format!("noise intensity must be non-negative, got {intensity}")));
        }
        if intensity == 0.0 {
            return Ok(vec![0.0; self.qubits]);
        }
        Ok((0..self.qubits).map(|_| intensity * rng.random_range(-1.0..=1.0) * scale).collect())
    }

    /// Add `Σ_i δ_i Z_i`, merging into existing single-Z terms.
    pub fn with_z_offsets(&self, offsets: &[f64]) -> Self {
        let mut out = self.clone();
        for (q, delta) in offsets.iter().enumerate() {
            if *delta != 0.0 {
                *out.terms.entry(PauliWord::single(self.qubits, q, PauliAxis::Z)).or_insert(0.0) += delta;
            }
        }
        out
    }

    /// Random decoherence-style perturbation `H + Σ_i δ_i Z_i` with relative intensity `η`.
    pub fn add_noise<R: Rng + ?Sized>(&self, intensity: f64, rng: &mut R) -> Result<Self> {
        let offsets = self.noise_offsets(intensity, self.max_abs_coefficient(), rng)?;
        Ok(self.with_z_offsets(&offsets))
    }

    /// `Σ_j α_j ⟨ψ|P_j|ψ⟩`.
    pub fn energy(&self, state: &StateVector) -> Result<f64> {
        self.check_state(state)?;
        let amps = state.amplitudes();
        Ok(self.terms().map(|t| t.coefficient * t.word.expectation(amps)).sum())
    }

    pub(crate) fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.qubits {
            return Err(Error::DimensionMismatch { expected: self.qubits, found: state.num_qubits() });
        }
        Ok(())
    }

    /// Plain-text coefficient file: one `coefficient axis-string` line per term.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in self.terms() {
            let _ = writeln!(s, "{} {}", t.coefficient, t.word);
        }
        s
    }

    /// Parse the coefficient-file format.
    ///
    /// Blank lines and `#` comments (full-line or trailing) are ignored; duplicate
    /// words are summed in place of their first occurrence.
    pub fn parse(text: &str) -> Result<Self> {
        let mut h: Option<PauliHamiltonian> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (coef, axes) = match (fields.next(), fields.next(), fields.next()) {
                (Some(c), Some(a), None) => (c, a),
                _ => return Err(Error::MalformedLine { line: line_no }),
            };
            let coefficient: f64 = coef
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::MalformedCoefficient { line: line_no, token: coef.to_string() })?;
            let word: PauliWord = axes.parse().map_err(|e| match e {
                Error::IllegalAxis { found, .. } => Error::IllegalAxis { line: line_no, found },
                other => other,
            })?;
            let ham = h.get_or_insert_with(|| PauliHamiltonian::new(word.num_qubits()));
            if word.num_qubits() != ham.qubits {
                return Err(Error::InconsistentLength { line: line_no, expected: ham.qubits, found: word.num_qubits() });
            }
            ham.add_term(word, coefficient)?;
        }
        h.ok_or(Error::EmptyHamiltonian)
    }
}

impl FromStr for PauliHamiltonian {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliHamiltonian::parse(s)
    }
}

/// `⟨ψ|P|ψ⟩` for a word spanning the whole register.
pub fn word_expectation(word: &PauliWord, state: &StateVector) -> Result<f64> {
    if word.num_qubits() != state.num_qubits() {
        return Err(Error::DimensionMismatch { expected: word.num_qubits(), found: state.num_qubits() });
    }
    Ok(word.expectation(state.amplitudes()))
}
