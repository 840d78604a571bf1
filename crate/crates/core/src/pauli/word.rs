use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' => Some(PauliAxis::I),
            'X' | 'x' => Some(PauliAxis::X),
            'Y' | 'y' => Some(PauliAxis::Y),
            'Z' | 'z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    /// Symplectic (x, z) bits.
    fn bits(self) -> (bool, bool) {
        match self {
            PauliAxis::I => (false, false),
            PauliAxis::X => (true, false),
            PauliAxis::Y => (true, true),
            PauliAxis::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliAxis::I,
            (true, false) => PauliAxis::X,
            (true, true) => PauliAxis::Y,
            (false, true) => PauliAxis::Z,
        }
    }
}

/// Longest word representable by the 64-bit symplectic masks.
pub const MAX_WORD_QUBITS: usize = 62;

/// An n-qubit Pauli word in symplectic form.
///
/// Bit q of `x` / `z` describes the factor on qubit q: X = (1,0), Y = (1,1),
/// Z = (0,1). Acting on a basis state,
/// `P|b⟩ = i^{#Y} · (−1)^{popcount(b & z)} · |b ⊕ x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    qubits: u8,
    x: u64,
    z: u64,
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

impl PauliWord {
    pub fn identity(qubits: usize) -> Self {
        assert!(qubits <= MAX_WORD_QUBITS, "word too long");
        Self { qubits: qubits as u8, x: 0, z: 0 }
    }

    /// Build from per-qubit factors; `axes[q]` acts on qubit q.
    pub fn from_axes(axes: &[PauliAxis]) -> Result<Self> {
        if axes.len() > MAX_WORD_QUBITS {
            return Err(Error::TooManyQubits { qubits: axes.len(), limit: MAX_WORD_QUBITS });
        }
        let mut word = Self::identity(axes.len());
        for (q, axis) in axes.iter().enumerate() {
            word.set_axis(q, *axis);
        }
        Ok(word)
    }

    /// A single non-identity factor on `qubit`.
    pub fn single(qubits: usize, qubit: usize, axis: PauliAxis) -> Self {
        assert!(qubit < qubits);
        let mut word = Self::identity(qubits);
        word.set_axis(qubit, axis);
        word
    }

    /// Word from raw symplectic masks; bits above `qubits` must be clear.
    pub fn from_masks(qubits: usize, x: u64, z: u64) -> Self {
        assert!(qubits <= MAX_WORD_QUBITS);
        let mask = (1u64 << qubits) - 1;
        assert!(x & !mask == 0 && z & !mask == 0, "mask bits beyond word length");
        Self { qubits: qubits as u8, x, z }
    }

    fn set_axis(&mut self, qubit: usize, axis: PauliAxis) {
        let (xb, zb) = axis.bits();
        let bit = 1u64 << qubit;
        self.x = if xb { self.x | bit } else { self.x & !bit };
        self.z = if zb { self.z | bit } else { self.z & !bit };
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits as usize
    }

    pub fn axis(&self, qubit: usize) -> PauliAxis {
        let bit = 1u64 << qubit;
        PauliAxis::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    pub fn axes(&self) -> Vec<PauliAxis> {
        (0..self.num_qubits()).map(|q| self.axis(q)).collect()
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits carrying a non-identity factor.
    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// `i^{#Y}`, the constant part of the basis-state phase.
    pub fn y_phase(&self) -> Complex64 {
        I_POWERS[(self.y_count() % 4) as usize]
    }

    /// Phase picked up by basis state `b`: `⟨b ⊕ x| P |b⟩`.
    #[inline]
    pub fn phase(&self, b: usize) -> Complex64 {
        let sign = ((b as u64 & self.z).count_ones() & 1) as usize;
        I_POWERS[((self.y_count() as usize) + 2 * sign) % 4]
    }

    /// Sign part of the phase, `(−1)^{popcount(b & z)}`.
    #[inline]
    pub fn sign(&self, b: usize) -> f64 {
        if (b as u64 & self.z).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// `out += coefficient · P · input` over a full register of this word's width.
    pub fn accumulate(&self, coefficient: Complex64, input: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), out.len());
        let x = self.x as usize;
        let base = coefficient * self.y_phase();
        for (b, amp) in input.iter().enumerate() {
            out[b ^ x] += base * self.sign(b) * amp;
        }
    }

    /// `⟨ψ|P|ψ⟩` for an amplitude vector of this word's width (not necessarily normalized).
    pub fn expectation(&self, amplitudes: &[Complex64]) -> f64 {
        let x = self.x as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, amp) in amplitudes.iter().enumerate() {
            acc += amplitudes[b ^ x].conj() * self.sign(b) * amp;
        }
        (acc * self.y_phase()).re
    }

    /// Every word on `qubits` qubits, identity first; index digits (base 4, qubit 0
    /// least significant) map 0..4 to I, X, Y, Z.
    pub fn all(qubits: usize) -> impl Iterator<Item = PauliWord> {
        assert!(qubits <= 31, "full Pauli basis too large");
        (0u64..(1u64 << (2 * qubits))).map(move |index| {
            let mut word = PauliWord::identity(qubits);
            for q in 0..qubits {
                let digit = (index >> (2 * q)) & 3;
                word.set_axis(q, PauliAxis::ALL[digit as usize]);
            }
            word
        })
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.num_qubits()).rev() {
            write!(f, "{}", self.axis(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Parse a Kronecker-ordered axis string (leftmost character = highest qubit).
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.is_empty() {
            return Err(Error::MalformedLine { line: 0 });
        }
        let mut axes = Vec::with_capacity(chars.len());
        for c in chars.iter().rev() {
            axes.push(PauliAxis::from_char(*c).ok_or(Error::IllegalAxis { line: 0, found: *c })?);
        }
        PauliWord::from_axes(&axes)
    }
}

impl Serialize for PauliWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
