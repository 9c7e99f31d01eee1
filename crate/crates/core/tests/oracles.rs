//! Library results checked against slow, independent reimplementations.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sweepwords_core::exactalg::{
    discriminant, Integers, Matrix, MatrixTuple, PrimeField, Ring, MERSENNE_61,
};
use sweepwords_core::genericity::{
    discriminant_at, generic_length_experiment, subspace_length, sweep_check, trial_rng,
};
use sweepwords_core::witness::{build_witness, verify_witness};
use sweepwords_core::words::{build_word_grid, Word};

/// Laplace expansion along the first row.
fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Naive matrix product over the integers.
fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn word_value(w: &Word, mats: &[Vec<Vec<BigInt>>]) -> Vec<Vec<BigInt>> {
    let mut acc = mats[w.letters()[0] - 1].clone();
    for &l in &w.letters()[1..] {
        acc = mat_mul(&acc, &mats[l - 1]);
    }
    acc
}

fn oracle_discriminant(words: &[Word], mats: &[Vec<Vec<BigInt>>]) -> BigInt {
    let rows: Vec<Vec<BigInt>> = words
        .iter()
        .map(|w| word_value(w, mats).into_iter().flatten().collect())
        .collect();
    cofactor_det(&rows)
}

fn to_big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

fn tuple_to_big(t: &MatrixTuple<Integers>) -> Vec<Vec<Vec<BigInt>>> {
    t.matrices()
        .iter()
        .map(|m| {
            (0..t.n())
                .map(|i| (0..t.n()).map(|j| m.get(i, j).clone()).collect())
                .collect()
        })
        .collect()
}

/// Rank over F_p by plain Gaussian elimination on `u64` rows.
fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let iv = inv(rows[rank][c]);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = mulm(rows[r][c], iv);
                let pivot = rows[rank].clone();
                for (x, &y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - mulm(f, y)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pair_fixture(field: PrimeField) -> MatrixTuple<PrimeField> {
    let x = Matrix::from_i64_rows(field, &[&[2, 0], &[0, 3]]).unwrap();
    let y = Matrix::from_i64_rows(field, &[&[0, 1], &[1, 0]]).unwrap();
    MatrixTuple::new(vec![x, y]).unwrap()
}

#[test]
fn f101_fixture_matches_cofactor_oracle() {
    let field = PrimeField::new(101).unwrap();
    let words: Vec<Word> = ["aa", "ab", "ba", "bb"]
        .iter()
        .map(|s| Word::parse(s, 2).unwrap())
        .collect();
    assert_eq!(words, build_word_grid(2, 2).unwrap().flatten());
    let lib = discriminant_at(&words, &pair_fixture(field)).unwrap();
    let oracle = oracle_discriminant(
        &words,
        &[to_big(&[&[2, 0], &[0, 3]]), to_big(&[&[0, 1], &[1, 0]])],
    );
    assert_eq!(oracle, BigInt::from(25));
    assert_eq!(lib, field.reduce_big(&oracle));
}

#[test]
fn integer_discriminants_match_cofactor_oracle() {
    let mut seed = 7u64;
    let mut next = || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((seed >> 33) % 19) as i64 - 9
    };
    for n in 2..=3 {
        let words = build_word_grid(n, 2).unwrap().flatten();
        for _ in 0..5 {
            let mats: Vec<Matrix<Integers>> = (0..2)
                .map(|_| {
                    let e: Vec<BigInt> = (0..n * n).map(|_| BigInt::from(next())).collect();
                    Matrix::from_big_entries(n, e).unwrap()
                })
                .collect();
            let t = MatrixTuple::new(mats).unwrap();
            let lib = discriminant_at(&words, &t).unwrap();
            assert_eq!(lib, oracle_discriminant(&words, &tuple_to_big(&t)), "n={n}");
        }
    }
}

#[test]
fn witness_n2_base10_vector() {
    let (_, t) = build_witness(2, 2, 10).unwrap();
    let grid = build_word_grid(2, 2).unwrap();
    let lib = verify_witness(&t, &grid).unwrap();
    let oracle = oracle_discriminant(&grid.flatten(), &tuple_to_big(&t));
    assert_eq!(oracle, BigInt::from(1_000_000));
    assert_eq!(lib, oracle);
}

#[test]
fn witness_n3_matches_oracle_and_is_nonzero() {
    let (_, t) = build_witness(3, 2, 0).unwrap();
    let grid = build_word_grid(3, 2).unwrap();
    let lib = verify_witness(&t, &grid).unwrap();
    assert!(!lib.is_zero());
    assert_eq!(lib, oracle_discriminant(&grid.flatten(), &tuple_to_big(&t)));
}

#[test]
fn sweep_fixture_resolved_by_rank_oracle() {
    // X = e11 + 2 e22, Y = e12 + e21: xy and yx both live on the
    // off-diagonal, together with y, so at most three directions.
    let p = 101;
    let field = PrimeField::new(p).unwrap();
    let x = Matrix::from_i64_rows(field, &[&[1, 0], &[0, 2]]).unwrap();
    let y = Matrix::from_i64_rows(field, &[&[0, 1], &[1, 0]]).unwrap();
    let t = MatrixTuple::new(vec![x, y]).unwrap();
    let words: Vec<Word> = ["a", "b", "ab", "ba"]
        .iter()
        .map(|s| Word::parse(s, 2).unwrap())
        .collect();
    let rows = vec![
        vec![1, 0, 0, 2],
        vec![0, 1, 1, 0],
        vec![0, 1, 2, 0],
        vec![0, 2, 1, 0],
    ];
    assert_eq!(rank_mod(rows, p), 3);
    assert!(!sweep_check(&words, &t).unwrap());
}

/// dim span{w(t) : 1 <= |w| <= k} for k = 1..=max_k, by listing every word.
fn brute_force_chain(t: &MatrixTuple<PrimeField>, max_k: usize) -> Vec<usize> {
    let p = t.ring().modulus();
    let mut layer: Vec<Matrix<PrimeField>> = t.matrices().to_vec();
    let mut all: Vec<Vec<u64>> = layer.iter().map(|m| m.entries().to_vec()).collect();
    let mut dims = vec![rank_mod(all.clone(), p)];
    for _ in 1..max_k {
        layer = layer
            .iter()
            .flat_map(|u| t.matrices().iter().map(move |a| u.mul(a).unwrap()))
            .collect();
        all.extend(layer.iter().map(|m| m.entries().to_vec()));
        dims.push(rank_mod(all.clone(), p));
    }
    dims
}

#[test]
fn length_chain_matches_brute_force_span() {
    let field = PrimeField::new(1_000_003).unwrap();
    let e11 = Matrix::unit(field, 2, 0, 0);
    let swap = Matrix::from_i64_rows(field, &[&[0, 1], &[1, 0]]).unwrap();
    let t = MatrixTuple::new(vec![e11, swap]).unwrap();
    let report = subspace_length(&t, 10, false).unwrap();
    let oracle = brute_force_chain(&t, report.chain.len());
    assert_eq!(report.chain, oracle);
    assert_eq!(report.terminal_dim, 4);

    for (n, g, seed) in [(2usize, 2usize, 1u64), (3, 2, 2), (3, 3, 3), (4, 2, 4)] {
        let t = MatrixTuple::random(field, n, g, false, &mut trial_rng(seed, 0));
        let report = subspace_length(&t, n * n + 1, false).unwrap();
        assert_eq!(
            report.chain,
            brute_force_chain(&t, report.chain.len()),
            "n={n} g={g}"
        );
    }
}

#[test]
fn generic_n2_length_is_two() {
    let e = generic_length_experiment(2, 2, MERSENNE_61, 5, 11, false, false).unwrap();
    for t in &e.trials {
        assert_eq!(t.chain, vec![2, 4, 4]);
        assert_eq!(t.length, Some(2));
    }
}

#[test]
fn identity_pair_length() {
    let field = PrimeField::mersenne61();
    let t = MatrixTuple::new(vec![Matrix::identity(field, 2), Matrix::identity(field, 2)]).unwrap();
    let r = subspace_length(&t, 5, false).unwrap();
    assert_eq!(
        (r.chain.clone(), r.length, r.terminal_dim),
        (vec![1, 1], Some(1), 1)
    );
}

#[test]
fn bareiss_matches_cofactor_on_dense_integers() {
    let ring = Integers;
    let rows: Vec<Vec<i64>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| ((i * 7 + j * 3 + i * j) % 11) as i64 - 5)
                .collect()
        })
        .collect();
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    assert_eq!(ring.determinant(big.clone()), cofactor_det(&big));

    let ms: Vec<Matrix<Integers>> = (0..4)
        .map(|k| Matrix::from_big_entries(2, big[k][..4].to_vec()).unwrap())
        .collect();
    let sub: Vec<Vec<BigInt>> = big[..4].iter().map(|r| r[..4].to_vec()).collect();
    assert_eq!(discriminant(&ms).unwrap(), cofactor_det(&sub));
}
