mod common;

use common::invariants::*;

fn all(check: fn(u64) -> Check, seeds: std::ops::Range<u64>) {
    let failures: Vec<String> = seeds.filter_map(|s| check(s).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn deflation_annihilates_and_preserves() {
    all(annihilation_and_preservation, 0..200);
}

#[test]
fn dominance_transfers_to_next_level() {
    all(dominance_transfer, 0..200);
}

#[test]
fn terminal_residual_is_rank_one() {
    all(rank_one_terminal, 0..200);
}

#[test]
fn overlap_with_dominant_vector_is_monotone() {
    all(monotone_overlap, 0..200);
}

#[test]
fn lcu_and_direct_traces_match() {
    all(path_independence, 0..80);
    let checked = (0..80).filter(|&s| min_gap(&instance(s, 3)) > 1e-6).count();
    assert!(checked >= 20, "only {checked} nondegenerate instances");
}

#[test]
fn compiled_observable_matches_dense() {
    all(observable_consistency, 0..100);
}

#[test]
fn spectrum_matches_oracle_on_random_instances() {
    all(oracle_spectrum_equivalence, 0..100);
}

