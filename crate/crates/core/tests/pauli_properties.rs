mod common;

use common::hamiltonian_from_seed;
use proptest::prelude::*;
use qspectrum_core::pauli::DEFAULT_BIAS_MARGIN;
use qspectrum_core::{exact_spectrum, seeded_rng, to_dense, PauliHamiltonian, PauliWord, StateVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energy_matches_dense_expectation(seed in any::<u64>()) {
        let h = hamiltonian_from_seed(seed, 4, 12);
        let psi = StateVector::random(h.num_qubits(), &mut seeded_rng(seed ^ 1));
        let dense = to_dense(&h).unwrap().expectation(&psi).unwrap();
        prop_assert!((h.energy(&psi).unwrap() - dense).abs() < 1e-10);
    }

    #[test]
    fn shift_moves_only_identity_and_the_spectrum(seed in any::<u64>(), bias in -3.0f64..3.0) {
        let h = hamiltonian_from_seed(seed, 3, 10);
        let s = h.shift(bias);
        let id = PauliWord::identity(h.num_qubits());
        for w in s.words().filter(|w| !w.is_identity()) {
            prop_assert_eq!(s.coefficient(w), h.coefficient(w));
        }
        prop_assert!((s.coefficient(&id) - (h.coefficient(&id) - bias)).abs() < 1e-15);
        let a = exact_spectrum(&to_dense(&h).unwrap()).unwrap();
        let b = exact_spectrum(&to_dense(&s).unwrap()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - bias - y).abs() < 1e-10);
        }
    }

    #[test]
    fn default_bias_exceeds_spectrum_and_zero(seed in any::<u64>()) {
        let h = hamiltonian_from_seed(seed, 4, 12);
        let lam = h.default_bias(DEFAULT_BIAS_MARGIN);
        let top = *exact_spectrum(&to_dense(&h).unwrap()).unwrap().eigenvalues.last().unwrap();
        prop_assert!(lam > top);
        prop_assert!(lam > 0.0);
    }

    #[test]
    fn text_roundtrip(seed in any::<u64>()) {
        let h = hamiltonian_from_seed(seed, 5, 12);
        let back = PauliHamiltonian::parse(&h.to_text()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn zero_noise_is_identity_and_seeded_noise_repeats(seed in any::<u64>()) {
        let h = hamiltonian_from_seed(seed, 3, 8);
        prop_assert_eq!(h.add_noise(0.0, &mut seeded_rng(seed)).unwrap(), h.clone());
        let a = h.add_noise(0.1, &mut seeded_rng(seed)).unwrap();
        let b = h.add_noise(0.1, &mut seeded_rng(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn duplicate_words_merge_on_parse() {
    let h = PauliHamiltonian::parse("# comment\r\n0.5 XZ\n0.25 XZ\n-1 II\n").unwrap();
    assert_eq!(h.len(), 2);
    assert_eq!(h.coefficient(&"XZ".parse().unwrap()), 0.75);
}
