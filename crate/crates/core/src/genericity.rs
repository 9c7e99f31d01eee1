//! Randomized certification of local linear independence, sweeping checks,
//! generating-length chains and the experiments built on them.
//!
//! Every randomized routine takes an explicit 64-bit seed. Trial `t` draws
//! from a ChaCha8 generator seeded with that seed and switched to stream `t`,
//! so results do not depend on how trials are scheduled across threads.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactalg::{
    discriminant, evaluate_words, rank, Matrix, MatrixTuple, PrimeField, Ring, SubspaceBasis,
};
use crate::words::{ceil_log, Word};

/// Smallest modulus accepted for randomized certification.
pub const MIN_CERTIFICATION_PRIME: u64 = 1 << 40;

/// Generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Hex SHA-256 of the comma-joined word strings.
pub fn words_digest(words: &[Word]) -> String {
    let joined = words
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(",");
    hex::encode(Sha256::digest(joined.as_bytes()))
}

/// A nonnegative fraction kept as exact integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Some trial found a nonzero discriminant.
    Certified,
    /// Every trial vanished; nothing is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub g: usize,
    pub d: usize,
    pub words_digest: String,
    pub trials: usize,
    pub successes: usize,
    pub prime: u64,
    pub seed: u64,
    pub trial_nonzero: Vec<bool>,
    /// Schwartz-Zippel bound on a single trial vanishing at a nonzero
    /// discriminant: total word degree over p.
    pub single_trial_failure_bound: Fraction,
    pub verdict: Verdict,
}

fn check_words(words: &[Word], g: usize) -> Result<()> {
    for w in words {
        if w.is_empty() {
            return Err(Error::InvalidWord(
                "the empty word is not allowed here".into(),
            ));
        }
        if let Some(&l) = w.letters().iter().find(|&&l| l > g) {
            return Err(Error::InvalidWord(format!(
                "word {w} uses letter {l} beyond g = {g}"
            )));
        }
    }
    Ok(())
}

fn certification_field(p: u64) -> Result<PrimeField> {
    if p <= MIN_CERTIFICATION_PRIME {
        return Err(Error::InvalidModulus(p, "certification needs p > 2^40"));
    }
    PrimeField::new(p)
}

/// Discriminant of the words evaluated at one tuple.
pub fn discriminant_at<R: Ring>(words: &[Word], t: &MatrixTuple<R>) -> Result<R::Elem> {
    let n = t.n();
    if words.len() != n * n {
        return Err(Error::InvalidWord(format!(
            "need exactly {} words for {n}x{n} matrices, got {}",
            n * n,
            words.len()
        )));
    }
    check_words(words, t.g())?;
    discriminant(&evaluate_words(words, t)?)
}

/// Tests the `n²` words for local linear independence by evaluating their
/// discriminant at `trials` uniform points of `F_p^{g n²}`.
///
/// One nonzero trial certifies independence. If every trial vanishes the
/// report is inconclusive, never a claim of dependence.
pub fn is_locally_linearly_independent(
    words: &[Word],
    n: usize,
    g: usize,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<CertificationReport> {
    if n == 0 || g < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and g >= 2, got n={n}, g={g}"
        )));
    }
    if words.len() != n * n {
        return Err(Error::InvalidWord(format!(
            "need exactly {} words, got {}",
            n * n,
            words.len()
        )));
    }
    check_words(words, g)?;
    let field = certification_field(p)?;
    let trial_nonzero = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let t = MatrixTuple::random(field, n, g, false, &mut rng);
            discriminant_at(words, &t).map(|v| v != 0)
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = trial_nonzero.iter().filter(|&&b| b).count();
    let total_degree: u64 = words.iter().map(|w| w.degree() as u64).sum();
    Ok(CertificationReport {
        n,
        g,
        d: ceil_log(g, n),
        words_digest: words_digest(words),
        trials,
        successes,
        prime: p,
        seed,
        trial_nonzero,
        single_trial_failure_bound: Fraction {
            numerator: total_degree,
            denominator: p,
        },
        verdict: if successes > 0 {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        },
    })
}

/// `true` iff the evaluated words span `M_n`. Any number of words is allowed.
pub fn sweep_check<R: Ring>(words: &[Word], t: &MatrixTuple<R>) -> Result<bool> {
    check_words(words, t.g())?;
    let n = t.n();
    if words.len() < n * n {
        return Ok(false);
    }
    Ok(rank(&evaluate_words(words, t)?)? == n * n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthReport {
    pub n: usize,
    pub g: usize,
    pub include_identity: bool,
    /// `dim V^1, dim V^2, ...`, ending with the first repeated value when the
    /// chain stabilized.
    pub chain: Vec<usize>,
    /// First `k` with `V^k = V^{k+1}`; `None` if not reached within `max_k`.
    pub length: Option<usize>,
    pub terminal_dim: usize,
    pub paz_bound: usize,
    pub log_bound: usize,
}

impl LengthReport {
    /// Whether the stabilization index respects both bounds. Vacuous for
    /// `n = 1`, where both bounds are zero but every nonzero space has length 1.
    pub fn within_bounds(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        self.length
            .is_some_and(|l| l <= self.log_bound && l <= self.paz_bound)
    }

    /// Strictly increasing up to the length, then one repeat.
    pub fn chain_is_stationary(&self) -> bool {
        let Some(l) = self.length else {
            return self.chain.windows(2).all(|w| w[0] < w[1]);
        };
        self.chain.len() == l + 1
            && self.chain[..l].windows(2).all(|w| w[0] < w[1])
            && self.chain[l - 1] == self.chain[l]
    }
}

/// Computes the chain `V ⊆ V^2 ⊆ ...` for `V = span(t)` until it stabilizes
/// or `max_k` extension steps have been taken.
///
/// `V^{k+1} = V^k + sum_i A_i V^k`; only the basis elements added at step `k`
/// need multiplying, since `A_i V^{k-1} ⊆ V^k` already. With
/// `include_identity` the identity joins `V^1`.
pub fn subspace_length<R: Ring>(
    t: &MatrixTuple<R>,
    max_k: usize,
    include_identity: bool,
) -> Result<LengthReport> {
    if max_k == 0 {
        return Err(Error::InvalidInput("max_k must be at least 1".into()));
    }
    let n = t.n();
    let g = t.g();
    let mut basis = SubspaceBasis::new(t.ring().clone(), n);
    let mut frontier: Vec<Matrix<R>> = Vec::new();
    if include_identity {
        let id = Matrix::identity(t.ring().clone(), n);
        if basis.insert(&id)? {
            frontier.push(id);
        }
    }
    for a in t.matrices() {
        if basis.insert(a)? {
            frontier.push(a.clone());
        }
    }
    let mut chain = vec![basis.dim()];
    let mut length = None;
    for k in 1..=max_k {
        let mut added = Vec::new();
        for b in &frontier {
            for a in t.matrices() {
                let prod = a.mul(b)?;
                if basis.insert(&prod)? {
                    added.push(prod);
                }
            }
        }
        chain.push(basis.dim());
        if added.is_empty() {
            length = Some(k);
            break;
        }
        frontier = added;
    }
    Ok(LengthReport {
        n,
        g,
        include_identity,
        chain,
        length,
        terminal_dim: basis.dim(),
        paz_bound: (2 * n).saturating_sub(2),
        log_bound: 2 * ceil_log(g, n),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthTrial {
    pub trial: usize,
    pub length: Option<usize>,
    pub chain: Vec<usize>,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthExperiment {
    pub n: usize,
    pub g: usize,
    pub prime: u64,
    pub seed: u64,
    pub symmetric: bool,
    pub include_identity: bool,
    pub log_bound: usize,
    pub paz_bound: usize,
    pub trials: Vec<LengthTrial>,
    pub max_length: Option<usize>,
    pub all_within_bounds: bool,
    pub all_chains_stationary: bool,
}

/// Random-tuple generating-length experiment: for each trial samples a
/// uniform tuple over `F_p` and records its stabilization index.
pub fn generic_length_experiment(
    n: usize,
    g: usize,
    p: u64,
    trials: usize,
    seed: u64,
    symmetric: bool,
    include_identity: bool,
) -> Result<LengthExperiment> {
    if n == 0 || g < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and g >= 2, got n={n}, g={g}"
        )));
    }
    let field = PrimeField::new(p)?;
    let reports = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let t = MatrixTuple::random(field, n, g, symmetric, &mut rng);
            subspace_length(&t, n * n + 1, include_identity).map(|r| (trial, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let all_chains_stationary = reports.iter().all(|(_, r)| r.chain_is_stationary());
    let trials: Vec<LengthTrial> = reports
        .into_iter()
        .map(|(trial, r)| LengthTrial {
            trial,
            length: r.length,
            within_bounds: r.within_bounds(),
            chain: r.chain,
        })
        .collect();
    let max_length = trials.iter().map(|t| t.length).max().flatten();
    Ok(LengthExperiment {
        n,
        g,
        prime: p,
        seed,
        symmetric,
        include_identity,
        log_bound: 2 * ceil_log(g, n),
        paz_bound: (2 * n).saturating_sub(2),
        all_within_bounds: trials.iter().all(|t| t.within_bounds),
        all_chains_stationary,
        max_length,
        trials,
    })
}

/// Evaluations of all `g^s` words of degree `s`, in decreasing
/// lexicographic order.
pub fn evaluate_all_words<R: Ring>(t: &MatrixTuple<R>, s: usize) -> Result<Vec<Matrix<R>>> {
    if s == 0 {
        return Ok(vec![Matrix::identity(t.ring().clone(), t.n())]);
    }
    let mut layer: Vec<Matrix<R>> = t.matrices().to_vec();
    for _ in 1..s {
        // prefix-major: word u.x_k for each shorter word u
        let mut next = Vec::with_capacity(layer.len() * t.g());
        for u in &layer {
            for a in t.matrices() {
                next.push(u.mul(a)?);
            }
        }
        layer = next;
    }
    Ok(layer)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RosenthalOutcome {
    pub n: usize,
    pub g: usize,
    pub d: usize,
    /// Smallest `m` with `m^d >= n`; only that many matrices are random.
    pub g_bar: usize,
    pub rank: usize,
    pub spans: bool,
}

/// Checks that all `g^{2d}` words of degree `2d` span `M_n` at a random tuple
/// whose first `g_bar` matrices are uniform and whose remaining matrices are
/// zero.
pub fn rosenthal_check(
    n: usize,
    g: usize,
    d: usize,
    p: u64,
    seed: u64,
) -> Result<RosenthalOutcome> {
    if n == 0 || g < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and g >= 2, got n={n}, g={g}"
        )));
    }
    let words_needed = (n as u128).pow(2);
    let words_available = (g as u128).checked_pow(2 * d as u32).unwrap_or(u128::MAX);
    if words_available < words_needed {
        return Err(Error::Infeasible(format!(
            "{g}^{} = {words_available} words cannot span a space of dimension {words_needed}",
            2 * d
        )));
    }
    let field = PrimeField::new(p)?;
    let g_bar = (1..=g)
        .find(|&m| (m as u128).pow(d as u32) >= n as u128)
        .expect("g itself satisfies g^d >= n");
    let mut rng = trial_rng(seed, 0);
    let matrices = (0..g)
        .map(|k| {
            if k < g_bar {
                Matrix::random(field, n, &mut rng)
            } else {
                Matrix::zeros(field, n, n)
            }
        })
        .collect();
    let t = MatrixTuple::new(matrices)?;
    let r = rank(&evaluate_all_words(&t, 2 * d)?)?;
    Ok(RosenthalOutcome {
        n,
        g,
        d,
        g_bar,
        rank: r,
        spans: r == n * n,
    })
}

/// `count` distinct uniformly random words of the given degree.
pub fn random_distinct_words(
    g: usize,
    degree: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Word>> {
    let available = (g as u128).checked_pow(degree as u32).unwrap_or(u128::MAX);
    if available < count as u128 {
        return Err(Error::Infeasible(format!(
            "only {available} words of degree {degree} exist, {count} requested"
        )));
    }
    let letters: Vec<usize> = (1..=g).collect();
    let mut rng = trial_rng(seed, u64::MAX);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w: Vec<usize> = (0..degree)
            .map(|_| *letters.choose(&mut rng).expect("nonempty alphabet"))
            .collect();
        if seen.insert(w.clone()) {
            out.push(Word::new(w, g)?);
        }
    }
    Ok(out)
}
