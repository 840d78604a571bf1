use crate::pauli::PauliHamiltonian;

use super::measure::Components;

/// Subtract a found level: `α_j ← α_j − E·ε_j / 2^n` for every measured word.
///
/// Words not yet in `h` are appended (in measurement order) only when their
/// update reaches `support_tolerance`; existing words are always updated.
pub fn deflate(h: &PauliHamiltonian, energy: f64, components: &Components, support_tolerance: f64) -> PauliHamiltonian {
    let scale = energy / (1u64 << h.num_qubits()) as f64;
    let mut out = h.clone();
    if energy == 0.0 {
        return out;
    }
    for (word, eps) in components.iter() {
        let delta = scale * eps;
        match out.coefficient_mut(&word) {
            Some(c) => *c -= delta,
            None if delta.abs() >= support_tolerance => {
                out.add_term(word, -delta).expect("measured words share the register width");
            }
            None => {}
        }
    }
    out
}
