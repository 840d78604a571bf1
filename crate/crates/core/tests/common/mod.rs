#![allow(dead_code)]

use qspectrum_core::{PauliHamiltonian, PauliWord, SimRng};
use rand::Rng;

/// `terms` random words with coefficients in [−1, 1); duplicates merge.
pub fn random_hamiltonian(n: usize, terms: usize, rng: &mut SimRng) -> PauliHamiltonian {
    let mut h = PauliHamiltonian::new(n);
    for _ in 0..terms {
        let x = rng.random_range(0..1u64 << n);
        let z = rng.random_range(0..1u64 << n);
        h.add_term(PauliWord::from_masks(n, x, z), rng.random_range(-1.0..1.0)).unwrap();
    }
    h
}

pub fn hamiltonian_from_seed(seed: u64, max_qubits: usize, max_terms: usize) -> PauliHamiltonian {
    let mut rng = qspectrum_core::seeded_rng(seed);
    let n = rng.random_range(1..=max_qubits);
    let terms = rng.random_range(1..=max_terms);
    random_hamiltonian(n, terms, &mut rng)
}

pub fn two_level_h2() -> PauliHamiltonian {
    PauliHamiltonian::from_strs(&[(-1.04235, "I"), (0.1813, "X"), (-0.78865, "Z")]).unwrap()
}

/// `max_k |b_k − e^{iφ}·a_k|` after aligning the global phase of `a` to `b`.
pub fn phase_aligned_distance(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    let ip: num_complex::Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { num_complex::Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (y - phase * x).norm()).fold(0.0, f64::max)
}

pub mod invariants;

/// Replica error bars against the exact trace over `trials` seeded runs:
/// `(fraction of trials enclosed at every iteration, fraction of enclosed points)`.
pub fn bracket_coverage(trials: u64, iterations: usize) -> (f64, f64) {
    use qspectrum_core::experiment::{recover_bias, run_experiment, ExperimentConfig, TwoLevelHamiltonian, HARDWARE_BETA};
    let h = TwoLevelHamiltonian::H2;
    let bias = recover_bias(&h, HARDWARE_BETA).unwrap();
    let exact = run_experiment(&h, bias, &ExperimentConfig { iterations, shots: 0, replicas: 1, ..Default::default() }).unwrap().means();
    let (mut whole, mut points) = (0usize, 0usize);
    for seed in 0..trials {
        let cfg = ExperimentConfig { iterations, shots: 10_000, replicas: 3, seed, ..Default::default() };
        let t = run_experiment(&h, bias, &cfg).unwrap();
        let hits = t.points.iter().zip(&exact).filter(|(p, e)| (p.mean - **e).abs() <= p.error_bar).count();
        points += hits;
        whole += usize::from(hits == iterations);
    }
    (whole as f64 / trials as f64, points as f64 / (trials as usize * iterations) as f64)
}
