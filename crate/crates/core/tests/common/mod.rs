//! Property checks shared by the property tests and the acceptance harness.
//!
//! Each check runs `cases` random cases from a proptest runner seeded with a
//! fixed value and returns the first failure, if any.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sweepwords_core::exactalg::{
    discriminant, evaluate_word, evaluate_words, rank, Integers, Matrix, MatrixTuple, PrimeField,
    Ring, MERSENNE_61,
};
use sweepwords_core::genericity::{evaluate_all_words, subspace_length, sweep_check, trial_rng};
use sweepwords_core::graphs::{
    build_graph, derive_walks_from_certificate, peel, verify_partition, WalkPartition,
};
use sweepwords_core::words::{build_word_grid, ceil_log, Word};

pub const DEFAULT_CASES: u32 = 128;

pub fn runner(cases: u32, seed: u64) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn finish<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn word_strategy(g: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=g, 1..=max_len).prop_map(move |l| Word::new(l, g).unwrap())
}

fn field() -> PrimeField {
    PrimeField::new(MERSENNE_61).unwrap()
}

/// `evaluate_word(uv) = evaluate_word(u) * evaluate_word(v)`.
pub fn monoid_homomorphism(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (1usize..=4, 2usize..=3, any::<u64>()).prop_flat_map(|(n, g, s)| {
        (
            Just(n),
            Just(g),
            Just(s),
            word_strategy(g, 5),
            word_strategy(g, 5),
        )
    });
    finish(runner(cases, seed).run(&strat, |(n, g, s, u, v)| {
        let t = MatrixTuple::random(field(), n, g, false, &mut trial_rng(s, 0));
        let lhs = evaluate_word(&u.concat(&v), &t).unwrap();
        let rhs = evaluate_word(&u, &t)
            .unwrap()
            .mul(&evaluate_word(&v, &t).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

fn random_matrices(n: usize, count: usize, seed: u64) -> Vec<Matrix<PrimeField>> {
    let mut rng = trial_rng(seed, 1);
    (0..count)
        .map(|_| Matrix::random(field(), n, &mut rng))
        .collect()
}

/// Swapping two of the `n²` inputs negates the discriminant.
pub fn alternating_discriminant(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (2usize..=3, any::<u64>()).prop_flat_map(|(n, s)| {
        let k = n * n;
        (Just(n), Just(s), 0..k, 0..k).prop_filter("distinct", |(_, _, i, j)| i != j)
    });
    finish(runner(cases, seed).run(&strat, |(n, s, i, j)| {
        let ms = random_matrices(n, n * n, s);
        let mut swapped = ms.clone();
        swapped.swap(i, j);
        let f = field();
        prop_assert_eq!(
            discriminant(&swapped).unwrap(),
            f.neg(&discriminant(&ms).unwrap())
        );
        Ok(())
    }))
}

/// `discriminant != 0` exactly when the rank is full, with a planted
/// dependency in half the cases.
pub fn discriminant_iff_full_rank(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (2usize..=3, any::<u64>(), any::<bool>(), any::<u64>());
    finish(runner(cases, seed).run(&strat, |(n, s, plant, c)| {
        let f = field();
        let mut ms = random_matrices(n, n * n, s);
        if plant {
            // last = c * first + second
            let comb = ms[0]
                .scale(&f.reduce_i64(c as i64 >> 2))
                .add(&ms[1])
                .unwrap();
            let last = ms.len() - 1;
            ms[last] = comb;
        }
        let det = discriminant(&ms).unwrap();
        let full = rank(&ms).unwrap() == n * n;
        prop_assert_eq!(!f.is_zero(&det), full);
        if plant {
            prop_assert!(!full);
        }
        Ok(())
    }))
}

/// Reading `vectorize(m)` back row-major reproduces `m`.
pub fn vectorize_bijection(cases: u32, seed: u64) -> Result<(), String> {
    finish(
        runner(cases, seed).run(&(1usize..=5, any::<u64>()), |(n, s)| {
            let m = random_matrices(n, 1, s).pop().unwrap();
            let v = m.vectorize().unwrap();
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(&v[i * n + j], m.get(i, j));
                }
            }
            prop_assert_eq!(Matrix::from_vector(field(), n, v).unwrap(), m);
            Ok(())
        }),
    )
}

/// Integer discriminants reduced mod p equal the F_p discriminant of the
/// reduced inputs.
pub fn integer_vs_prime_field(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (
        2usize..=3,
        prop::collection::vec(-1000i64..=1000, 81),
        prop::sample::select(vec![101u64, 1_000_003, MERSENNE_61]),
    );
    finish(runner(cases, seed).run(&strat, |(n, vals, p)| {
        let f = PrimeField::new(p).unwrap();
        let k = n * n;
        let ms: Vec<Matrix<Integers>> = (0..k)
            .map(|idx| {
                let e = (0..k).map(|t| vals[(idx * k + t) % 81].into()).collect();
                Matrix::from_big_entries(n, e).unwrap()
            })
            .collect();
        let exact = discriminant(&ms).unwrap();
        let reduced: Vec<Matrix<PrimeField>> = ms.iter().map(|m| m.reduce_mod(f)).collect();
        prop_assert_eq!(f.reduce_big(&exact), discriminant(&reduced).unwrap());
        Ok(())
    }))
}

/// Length chains are nondecreasing, strictly increasing up to the length,
/// and stay put one step past it. Spanning grid words force `length <= 2d`.
pub fn chain_monotonicity(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (
        1usize..=4,
        2usize..=3,
        any::<bool>(),
        any::<bool>(),
        any::<u64>(),
    );
    finish(
        runner(cases, seed).run(&strat, |(n, g, symmetric, sparse, s)| {
            let f = field();
            let mut t = MatrixTuple::random(f, n, g, symmetric, &mut trial_rng(s, 0));
            if sparse {
                // degenerate tuples exercise short chains
                let ms: Vec<Matrix<PrimeField>> = t
                    .matrices()
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        if k == 0 {
                            m.clone()
                        } else {
                            Matrix::identity(f, n)
                        }
                    })
                    .collect();
                t = MatrixTuple::new(ms).unwrap();
            }
            let r = subspace_length(&t, n * n + 1, false).unwrap();
            prop_assert!(r.chain.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(r.chain_is_stationary(), "chain {:?}", r.chain);
            let l = r.length.expect("stabilizes within n² + 1 steps");
            let mut upto: Vec<Matrix<PrimeField>> = Vec::new();
            for s in 1..=l + 2 {
                upto.extend(evaluate_all_words(&t, s).unwrap());
                if s >= l {
                    prop_assert_eq!(rank(&upto).unwrap(), r.terminal_dim, "k={}", s);
                }
            }
            if n >= 2 {
                let grid = build_word_grid(n, g).unwrap().flatten();
                if sweep_check(&grid, &t).unwrap() {
                    prop_assert!(l <= 2 * ceil_log(g, n));
                }
            }
            Ok(())
        }),
    )
}

/// `(c A_1, ..., c A_g)` has the same length chain as `(A_1, ..., A_g)`.
pub fn scale_invariance(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (
        1usize..=4,
        2usize..=3,
        any::<bool>(),
        any::<u64>(),
        1u64..MERSENNE_61,
    );
    finish(
        runner(cases, seed).run(&strat, |(n, g, include_identity, s, c)| {
            let t = MatrixTuple::random(field(), n, g, false, &mut trial_rng(s, 0));
            let a = subspace_length(&t, n * n + 1, include_identity).unwrap();
            let b = subspace_length(&t.scale(&c), n * n + 1, include_identity).unwrap();
            prop_assert_eq!(a.chain, b.chain);
            Ok(())
        }),
    )
}

/// The certificate partition repeated `m` times, walks shuffled within
/// each slot.
pub fn scaled_certificate_partition(g: usize, d: usize, m: u64, shuffle: u64) -> WalkPartition {
    let base = derive_walks_from_certificate(g.pow(d as u32), g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
    let walks = base
        .walks
        .iter()
        .map(|(&k, ws)| {
            let mut all: Vec<_> = (0..m).flat_map(|_| ws.iter().cloned()).collect();
            all.shuffle(&mut rng);
            (k, all)
        })
        .collect();
    WalkPartition { g, d, m, walks }
}

/// Peeling the first and last edge of every walk of a partition of
/// `G_d^(m)` leaves `G_{d-1}^(g² m)` and a valid partition of it.
pub fn peeling(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (
        prop::sample::select(vec![(2usize, 2usize), (2, 3), (3, 2)]),
        1u64..=3,
        any::<u64>(),
    );
    finish(runner(cases, seed).run(&strat, |((g, d), m, shuffle)| {
        let graph = build_graph(g, d, m).unwrap();
        let partition = scaled_certificate_partition(g, d, m, shuffle);
        prop_assert!(verify_partition(&graph, &partition));
        let (rest, inner) = peel(&graph, &partition).unwrap();
        let smaller = build_graph(g, d - 1, m * (g * g) as u64).unwrap();
        prop_assert_eq!(&rest, smaller.edges());
        prop_assert!(verify_partition(&smaller, &inner));
        Ok(())
    }))
}

/// A nonzero certification trial implies full rank of the same evaluations.
pub fn certification_soundness(cases: u32, seed: u64) -> Result<(), String> {
    finish(
        runner(cases, seed).run(&(2usize..=4, 2usize..=3, any::<u64>()), |(n, g, s)| {
            let t = MatrixTuple::random(field(), n, g, false, &mut trial_rng(s, 0));
            let words = build_word_grid(n, g).unwrap().flatten();
            let values = evaluate_words(&words, &t).unwrap();
            let det = discriminant(&values).unwrap();
            if det != 0 {
                prop_assert_eq!(rank(&values).unwrap(), n * n);
            } else {
                return Err(TestCaseError::reject("vanishing point"));
            }
            Ok(())
        }),
    )
}
