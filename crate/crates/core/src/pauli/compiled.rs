use num_complex::Complex64;

use super::hamiltonian::PauliHamiltonian;

/// A Pauli sum regrouped by X-mask.
///
/// Words sharing an X-mask move amplitude `b → b ⊕ x` together, so their
/// phases fold into one diagonal: `H ψ [b ⊕ x] += d_x[b] · ψ[b]`. Applying
/// costs one pass per distinct mask instead of one per term.
#[derive(Debug, Clone)]
pub struct CompiledOperator {
    dim: usize,
    groups: Vec<(usize, Vec<Complex64>)>,
}

impl CompiledOperator {
    pub fn new(h: &PauliHamiltonian) -> Self {
        let dim = 1usize << h.num_qubits();
        let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
        for term in h.terms() {
            if term.coefficient == 0.0 {
                continue;
            }
            let x = term.word.x_mask() as usize;
            let slot = match groups.iter().position(|(gx, _)| *gx == x) {
                Some(i) => i,
                None => {
                    groups.push((x, vec![Complex64::new(0.0, 0.0); dim]));
                    groups.len() - 1
                }
            };
            let base = term.word.y_phase() * term.coefficient;
            for (b, d) in groups[slot].1.iter_mut().enumerate() {
                *d += base * term.word.sign(b);
            }
        }
        Self { dim, groups }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (x, diag) in &self.groups {
            for (b, (d, amp)) in diag.iter().zip(psi).enumerate() {
                out[b ^ x] += d * amp;
            }
        }
        out
    }

    /// `⟨ψ|H|ψ⟩` (real part).
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, diag) in &self.groups {
            for (b, (d, amp)) in diag.iter().zip(psi).enumerate() {
                acc += psi[b ^ x].conj() * d * amp;
            }
        }
        acc.re
    }
}
