//! Invariants over randomized inputs at fixed runner seeds.

mod common;

use common::*;

#[test]
fn evaluate_word_is_a_monoid_homomorphism() {
    monoid_homomorphism(DEFAULT_CASES, 1).unwrap();
}

#[test]
fn discriminant_is_alternating() {
    alternating_discriminant(DEFAULT_CASES, 2).unwrap();
}

#[test]
fn discriminant_detects_rank() {
    discriminant_iff_full_rank(DEFAULT_CASES, 3).unwrap();
}

#[test]
fn vectorize_roundtrips() {
    vectorize_bijection(DEFAULT_CASES, 4).unwrap();
}

#[test]
fn integer_and_prime_field_discriminants_agree() {
    integer_vs_prime_field(DEFAULT_CASES, 5).unwrap();
}

#[test]
fn length_chains_are_monotone_and_stationary() {
    chain_monotonicity(DEFAULT_CASES, 6).unwrap();
}

#[test]
fn length_chains_are_scale_invariant() {
    scale_invariance(DEFAULT_CASES, 7).unwrap();
}

#[test]
fn peeling_leaves_the_scaled_smaller_graph() {
    peeling(DEFAULT_CASES, 8).unwrap();
}

#[test]
fn nonzero_trials_have_full_rank() {
    certification_soundness(DEFAULT_CASES, 9).unwrap();
}
