use serde::Serialize;

use super::hamiltonian::PauliHamiltonian;

/// Qubit and gate-count formulas for one application of the shifted operator.
///
/// These are formula evaluations, not measured gate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceEstimate {
    pub work_qubits: usize,
    pub ancilla_qubits: usize,
    pub total_qubits: usize,
    pub terms: usize,
    pub padded_terms: usize,
    /// `n · L_pad · log2(L_pad)`: width of each controlled word times the
    /// number of ancilla-selected branches times the ancilla register size.
    pub gate_estimate: usize,
}

pub fn estimate_resources(h: &PauliHamiltonian) -> ResourceEstimate {
    let n = h.num_qubits();
    let terms = h.len().max(1);
    let padded_terms = terms.next_power_of_two();
    let ancilla_qubits = padded_terms.trailing_zeros() as usize;
    ResourceEstimate {
        work_qubits: n,
        ancilla_qubits,
        total_qubits: n + ancilla_qubits,
        terms: h.len(),
        padded_terms,
        gate_estimate: n * padded_terms * ancilla_qubits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;

    #[test]
    fn six_term_two_qubit() {
        let h = PauliHamiltonian::from_strs(&[
            (-0.4, "II"),
            (0.3, "IZ"),
            (-0.4, "ZI"),
            (0.5, "ZZ"),
            (0.09, "XX"),
            (0.09, "YY"),
        ])
        .unwrap();
        let r = estimate_resources(&h);
        assert_eq!((r.padded_terms, r.total_qubits, r.gate_estimate), (8, 5, 48));
        assert!(r.total_qubits <= 3 * r.work_qubits + 1);
    }

    #[test]
    fn identity_needs_no_ancilla() {
        let h = PauliHamiltonian::from_strs(&[(1.0, "III")]).unwrap();
        let r = estimate_resources(&h);
        assert_eq!((r.ancilla_qubits, r.total_qubits, r.gate_estimate), (0, 3, 0));
    }

    #[test]
    fn lih_scale() {
        let mut h = PauliHamiltonian::new(6);
        for w in PauliWord::all(6).take(118) {
            h.add_term(w, 0.01).unwrap();
        }
        let r = estimate_resources(&h);
        assert_eq!((r.terms, r.padded_terms, r.total_qubits), (118, 128, 13));
    }
}
