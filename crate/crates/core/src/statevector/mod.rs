//! Dense complex-amplitude simulator for the circuit primitives.
//!
//! Gates mutate the state in place (`&mut self` is the exclusive-access
//! contract); clone first to keep the input.

mod register;
mod sampling;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::PauliWord;

pub use register::RegisterLayout;
pub use sampling::{marginal, multinomial, sample_shots, ShotCounts};

/// 2×2 gate matrix, row-major.
pub type Gate2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest register the simulator will allocate.
pub const MAX_SIM_QUBITS: usize = 26;

/// Single-qubit factor of a product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ProductFactor {
    Zero,
    One,
    Plus,
    Minus,
}

impl ProductFactor {
    fn amplitudes(self) -> [Complex64; 2] {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            ProductFactor::Zero => [ONE, ZERO],
            ProductFactor::One => [ZERO, ONE],
            ProductFactor::Plus => [s, s],
            ProductFactor::Minus => [s, -s],
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(ProductFactor::Zero),
            '1' => Some(ProductFactor::One),
            '+' => Some(ProductFactor::Plus),
            '-' => Some(ProductFactor::Minus),
            _ => None,
        }
    }

    /// Parse a Kronecker-ordered label such as `"0+"` (leftmost = highest qubit).
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.trim()
            .chars()
            .map(|c| Self::from_char(c).ok_or_else(|| Error::InvalidArgument(format!("unknown product factor {c:?}"))))
            .collect()
    }
}

/// Normalized state of `qubits` qubits; amplitude `k` belongs to basis state `|k⟩`
/// with qubit 0 in the least-significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        assert!(qubits <= MAX_SIM_QUBITS, "register too large");
        let mut amps = vec![ZERO; 1 << qubits];
        amps[index] = ONE;
        Self { qubits, amps }
    }

    /// Normalize an arbitrary nonzero amplitude vector of power-of-two length.
    pub fn from_amplitudes(mut amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("amplitude count {dim} is not a power of two")));
        }
        let qubits = dim.trailing_zeros() as usize;
        if qubits > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { qubits, limit: MAX_SIM_QUBITS });
        }
        let norm = l2(&amps);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { qubits, amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    /// Product state; `factors[0]` is the highest qubit, the last entry is qubit 0.
    pub fn product(factors: &[ProductFactor]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("empty product-state specification".into()));
        }
        if factors.len() > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { qubits: factors.len(), limit: MAX_SIM_QUBITS });
        }
        let mut amps = vec![ONE];
        for f in factors {
            let [a0, a1] = f.amplitudes();
            amps = amps.iter().flat_map(|a| [a * a0, a * a1]).collect();
        }
        Ok(Self { qubits: factors.len(), amps })
    }

    /// `|+⟩^{⊗n}`.
    pub fn uniform(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { qubits, amps: vec![a; dim] }
    }

    /// Haar-like random state from i.i.d. complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(amps).expect("gaussian draw has nonzero norm")
    }

    /// `|high⟩ ⊗ |low⟩`: `low` occupies qubits `0..low.qubits`.
    pub fn tensor(high: &StateVector, low: &StateVector) -> Self {
        let mut amps = Vec::with_capacity(high.dim() * low.dim());
        for h in &high.amps {
            amps.extend(low.amps.iter().map(|l| h * l));
        }
        Self { qubits: high.qubits + low.qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, the phase-insensitive comparison used throughout.
    pub fn overlap_abs(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self.amps.iter().enumerate().filter(|(k, _)| k & bit != 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Rescale to unit norm; used after numerically lossy sequences.
    pub fn renormalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubits {
            return Err(Error::QubitOutOfRange { index: qubit, qubits: self.qubits });
        }
        Ok(())
    }

    fn check_targets(&self, targets: &[usize]) -> Result<u64> {
        let mut seen = 0u64;
        for &t in targets {
            self.check_qubit(t)?;
            if seen & (1 << t) != 0 {
                return Err(Error::DuplicateQubit(t));
            }
            seen |= 1 << t;
        }
        Ok(seen)
    }

    /// Apply `word` with its qubit q acting on register qubit `targets[q]`.
    pub fn apply_pauli_word(&mut self, word: &PauliWord, targets: &[usize]) -> Result<()> {
        if targets.len() != word.num_qubits() {
            return Err(Error::LengthMismatch { expected: word.num_qubits(), found: targets.len() });
        }
        self.check_targets(targets)?;
        let (mut x, mut z) = (0u64, 0u64);
        for (q, &t) in targets.iter().enumerate() {
            x |= ((word.x_mask() >> q) & 1) << t;
            z |= ((word.z_mask() >> q) & 1) << t;
        }
        let embedded = PauliWord::from_masks(self.qubits, x, z);
        permute_with_phase(&mut self.amps, &embedded);
        Ok(())
    }

    /// Arbitrary single-qubit gate.
    pub fn apply_gate(&mut self, qubit: usize, m: &Gate2) -> Result<()> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        for k in 0..self.amps.len() {
            if k & bit == 0 {
                let (a0, a1) = (self.amps[k], self.amps[k | bit]);
                self.amps[k] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[k | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Single-qubit gate on `target`, applied only where `control` reads 1.
    pub fn apply_controlled_gate(&mut self, control: usize, target: usize, m: &Gate2) -> Result<()> {
        self.check_targets(&[control, target])?;
        let (cbit, tbit) = (1usize << control, 1usize << target);
        for k in 0..self.amps.len() {
            if k & cbit != 0 && k & tbit == 0 {
                let (a0, a1) = (self.amps[k], self.amps[k | tbit]);
                self.amps[k] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[k | tbit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.apply_gate(qubit, &ry_matrix(theta))
    }

    /// `Rz(φ) = diag(e^{−iφ/2}, e^{iφ/2})`.
    pub fn apply_rz(&mut self, qubit: usize, phi: f64) -> Result<()> {
        let h = 0.5 * phi;
        self.apply_gate(qubit, &[[Complex64::from_polar(1.0, -h), ZERO], [ZERO, Complex64::from_polar(1.0, h)]])
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.apply_gate(qubit, &hadamard_matrix())
    }

    pub fn apply_hadamard_layer(&mut self, qubits: &[usize]) -> Result<()> {
        self.check_targets(qubits)?;
        for &q in qubits {
            self.apply_hadamard(q)?;
        }
        Ok(())
    }

    pub fn apply_s_dagger(&mut self, qubit: usize) -> Result<()> {
        self.apply_gate(qubit, &[[ONE, ZERO], [ZERO, Complex64::new(0.0, -1.0)]])
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        let mask = self.check_targets(&[a, b])? as usize;
        for (k, amp) in self.amps.iter_mut().enumerate() {
            if k & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }
}

/// `ψ ← P ψ` for a word spanning the whole slice.
pub(crate) fn permute_with_phase(amps: &mut [Complex64], word: &PauliWord) {
    let x = word.x_mask() as usize;
    let yp = word.y_phase();
    if x == 0 {
        if word.z_mask() == 0 {
            return;
        }
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= yp * word.sign(b);
        }
        return;
    }
    for b in 0..amps.len() {
        let c = b ^ x;
        if b < c {
            let (ab, ac) = (amps[b], amps[c]);
            amps[c] = yp * word.sign(b) * ab;
            amps[b] = yp * word.sign(c) * ac;
        }
    }
}

pub fn ry_matrix(theta: f64) -> Gate2 {
    let (s, c) = (0.5 * theta).sin_cos();
    [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
}

pub fn hadamard_matrix() -> Gate2 {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub(crate) fn l2(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
