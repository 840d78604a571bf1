//! One application of `U = H − λ0·I` as a linear combination of unitaries.
//!
//! The ancilla register is loaded with the signed, normalized coefficients
//! `a_j = α_j / C`, each branch applies its Pauli word to the work register,
//! and a Hadamard layer on the ancilla followed by postselection on `|0…0⟩`
//! leaves `U|ψ⟩ / (C·√L_pad)` in the work register.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{CompiledOperator, PauliHamiltonian, PauliWord};
use crate::statevector::{l2, RegisterLayout, StateVector};

/// `‖U ψ‖` below this means ψ is (numerically) in the kernel of U.
pub const KERNEL_THRESHOLD: f64 = 1e-12;

/// How a solver realizes `U|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApplyPath {
    /// Full ancilla circuit on the simulator.
    Lcu,
    /// Sum of Pauli actions on the work register; same result, no ancilla.
    #[default]
    Direct,
}

impl fmt::Display for ApplyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApplyPath::Lcu => "lcu",
            ApplyPath::Direct => "direct",
        })
    }
}

impl FromStr for ApplyPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lcu" => Ok(ApplyPath::Lcu),
            "direct" => Ok(ApplyPath::Direct),
            _ => Err(Error::InvalidArgument(format!("unknown apply path {s:?} (expected lcu or direct)"))),
        }
    }
}

/// Ancilla amplitudes and controlled-word schedule for one biased operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcuPlan {
    pub work_qubits: usize,
    pub ancilla_qubits: usize,
    pub live_terms: usize,
    pub padded_terms: usize,
    pub ancilla_amplitudes: Vec<f64>,
    pub words: Vec<PauliWord>,
    pub normalization: f64,
    pub bias: f64,
}

impl LcuPlan {
    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.work_qubits, self.ancilla_qubits)
    }

    /// `C² · L_pad`, the denominator of the success probability.
    pub fn probability_scale(&self) -> f64 {
        self.normalization * self.normalization * self.padded_terms as f64
    }
}

/// Result of one operator application.
#[derive(Debug, Clone, PartialEq)]
pub struct ApplyOutcome {
    /// `U|ψ⟩ / ‖U|ψ⟩‖` on the work register.
    pub state: StateVector,
    pub success_probability: f64,
    /// `‖U|ψ⟩‖` before renormalization.
    pub raw_norm: f64,
}

/// Build the plan for an already-shifted operator. `bias` is recorded only.
///
/// The identity word, when present, takes slot 0; the remaining words keep
/// their order. Slots past the live terms hold the identity with amplitude 0.
pub fn build_plan(h_shifted: &PauliHamiltonian, bias: f64) -> Result<LcuPlan> {
    let n = h_shifted.num_qubits();
    let id = PauliWord::identity(n);
    let mut terms: Vec<(PauliWord, f64)> = Vec::with_capacity(h_shifted.len());
    if h_shifted.contains(&id) {
        terms.push((id, h_shifted.coefficient(&id)));
    }
    terms.extend(h_shifted.terms().filter(|t| !t.word.is_identity()).map(|t| (t.word, t.coefficient)));

    let c = terms.iter().map(|(_, a)| a * a).sum::<f64>().sqrt();
    if terms.is_empty() || !(c > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let live = terms.len();
    let padded = live.next_power_of_two();
    let mut ancilla_amplitudes: Vec<f64> = terms.iter().map(|(_, a)| a / c).collect();
    let mut words: Vec<PauliWord> = terms.iter().map(|(w, _)| *w).collect();
    ancilla_amplitudes.resize(padded, 0.0);
    words.resize(padded, id);
    Ok(LcuPlan {
        work_qubits: n,
        ancilla_qubits: padded.trailing_zeros() as usize,
        live_terms: live,
        padded_terms: padded,
        ancilla_amplitudes,
        words,
        normalization: c,
        bias,
    })
}

/// Run encode → controlled words → Hadamard decode → postselect on the simulator.
pub fn lcu_apply(plan: &LcuPlan, psi: &StateVector) -> Result<ApplyOutcome> {
    if psi.num_qubits() != plan.work_qubits {
        return Err(Error::DimensionMismatch { expected: plan.work_qubits, found: psi.num_qubits() });
    }
    let layout = plan.layout();
    let ancilla = StateVector::from_real(&plan.ancilla_amplitudes)?;
    let mut joint = StateVector::tensor(&ancilla, psi);
    for (branch, word) in plan.words.iter().enumerate().take(plan.live_terms) {
        if !word.is_identity() {
            joint.apply_selected_word(&layout, branch, word)?;
        }
    }
    joint.apply_hadamard_layer(&layout.ancilla_qubits())?;

    // Project by hand: a vanishing branch is a kernel event here, not a
    // postselection failure, so the 1e-14 probability floor does not apply.
    let block = &joint.amplitudes()[layout.block(0)];
    let probability: f64 = block.iter().map(|a| a.norm_sqr()).sum();
    let raw_norm = (probability * plan.probability_scale()).sqrt();
    if raw_norm < KERNEL_THRESHOLD {
        return Err(Error::Kernel { norm: raw_norm });
    }
    let state = StateVector::from_amplitudes(block.to_vec())?;
    Ok(ApplyOutcome { state, success_probability: probability, raw_norm })
}

/// `U|ψ⟩` as a sum of Pauli actions, reported in the same shape as [`lcu_apply`].
pub fn direct_apply(h_shifted: &PauliHamiltonian, psi: &StateVector) -> Result<ApplyOutcome> {
    h_shifted.check_state(psi)?;
    let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for t in h_shifted.terms() {
        t.word.accumulate(Complex64::new(t.coefficient, 0.0), psi.amplitudes(), &mut out);
    }
    let plan = build_plan(h_shifted, 0.0)?;
    finish(out, plan.probability_scale())
}

fn finish(raw: Vec<Complex64>, probability_scale: f64) -> Result<ApplyOutcome> {
    let raw_norm = l2(&raw);
    if raw_norm < KERNEL_THRESHOLD {
        return Err(Error::Kernel { norm: raw_norm });
    }
    let success_probability = raw_norm * raw_norm / probability_scale;
    Ok(ApplyOutcome { state: StateVector::from_amplitudes(raw)?, success_probability, raw_norm })
}

/// A biased operator ready for repeated application along one path.
#[derive(Debug, Clone)]
pub struct PreparedOperator {
    path: ApplyPath,
    plan: LcuPlan,
    compiled: Option<CompiledOperator>,
}

impl PreparedOperator {
    pub fn new(h_shifted: &PauliHamiltonian, bias: f64, path: ApplyPath) -> Result<Self> {
        let plan = build_plan(h_shifted, bias)?;
        let compiled = match path {
            ApplyPath::Direct => Some(CompiledOperator::new(h_shifted)),
            ApplyPath::Lcu => None,
        };
        Ok(Self { path, plan, compiled })
    }

    pub fn path(&self) -> ApplyPath {
        self.path
    }

    pub fn plan(&self) -> &LcuPlan {
        &self.plan
    }

    pub fn apply(&self, psi: &StateVector) -> Result<ApplyOutcome> {
        match &self.compiled {
            Some(op) => {
                if psi.num_qubits() != self.plan.work_qubits {
                    return Err(Error::DimensionMismatch { expected: self.plan.work_qubits, found: psi.num_qubits() });
                }
                finish(op.apply(psi.amplitudes()), self.plan.probability_scale())
            }
            None => lcu_apply(&self.plan, psi),
        }
    }
}
