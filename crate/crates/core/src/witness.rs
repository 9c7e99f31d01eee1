//! Deterministic integer tuples on which the grid words span `M_n`.
//!
//! Every variable of the certificate monomial gets a distinct exponent `e`
//! and the matrix entry `B^e`; all other entries are zero. Nonvanishing is
//! then settled by the exact integer discriminant, and a vanishing result is
//! retried with `B` squared.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Integers, Matrix, MatrixRecord, MatrixTuple, PrimeField, Ring};
use crate::genericity::discriminant_at;
use crate::words::{build_word_grid, ceil_log, certificate_monomial, Variable, WordGrid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportEntry {
    pub letter: usize,
    pub row: usize,
    pub col: usize,
    pub level: usize,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSpec {
    pub n: usize,
    pub g: usize,
    pub d: usize,
    #[serde(serialize_with = "as_decimal")]
    pub base: BigInt,
    pub support: Vec<SupportEntry>,
    /// `n! (n^{2d-1})^n`, reported for comparison only.
    #[serde(serialize_with = "as_decimal")]
    pub m_constant: BigUint,
}

fn as_decimal<T: ToString, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Recursion level at which a support variable is introduced: loops at `r`
/// first appear at the smallest level `s` with `r <= g^{s-1}`; an edge of
/// letter `k >= 2` at level `s` joins vertices `(k-1) g^{s-1}` apart.
pub fn variable_level(v: &Variable, g: usize) -> usize {
    if v.letter == 1 {
        let mut s = 1;
        while g.pow(s as u32 - 1) < v.row {
            s += 1;
        }
        s
    } else {
        let gap = v.row.abs_diff(v.col) / (v.letter - 1);
        ceil_log(g, gap) + 1
    }
}

/// Smallest base that the construction accepts without forcing.
pub fn minimum_base(n: usize, g: usize) -> u64 {
    let d = ceil_log(g, n) as u64;
    2 * d * (n * n) as u64 + 1
}

/// `n! (n^{2d-1})^n`.
pub fn m_constant(n: usize, d: usize) -> BigUint {
    let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
    let inner = BigUint::from(n as u64).pow((2 * d).saturating_sub(1) as u32);
    fact * inner.pow(n as u32)
}

/// Builds the witness tuple with base `base` used exactly as given.
pub fn build_witness_with_base(
    n: usize,
    g: usize,
    base: &BigInt,
) -> Result<(WitnessSpec, MatrixTuple<Integers>)> {
    if base < &BigInt::from(2) {
        return Err(Error::InvalidInput(format!(
            "base must be at least 2, got {base}"
        )));
    }
    let d = ceil_log(g, n);
    let monomial = certificate_monomial(n, g)?;
    let mut support: Vec<SupportEntry> = monomial
        .variables()
        .map(|v| SupportEntry {
            letter: v.letter,
            row: v.row,
            col: v.col,
            level: variable_level(v, g),
            exponent: 0,
        })
        .collect();
    support.sort_by_key(|e| (e.letter, e.level, e.row, e.col));
    for (rank, e) in support.iter_mut().enumerate() {
        e.exponent = rank as u32;
    }
    let mut matrices = vec![Matrix::zeros(Integers, n, n); g];
    for e in &support {
        matrices[e.letter - 1].set(e.row - 1, e.col - 1, base.pow(e.exponent));
    }
    let spec = WitnessSpec {
        n,
        g,
        d,
        base: base.clone(),
        support,
        m_constant: m_constant(n, d),
    };
    Ok((spec, MatrixTuple::new(matrices)?))
}

/// Builds the witness with base `max(base_hint, 2 d n² + 1)`.
pub fn build_witness(
    n: usize,
    g: usize,
    base_hint: u64,
) -> Result<(WitnessSpec, MatrixTuple<Integers>)> {
    let base = base_hint.max(minimum_base(n, g));
    build_witness_with_base(n, g, &BigInt::from(base))
}

/// Exact integer discriminant of the grid words at the tuple; nonzero
/// certifies the witness.
pub fn verify_witness(t: &MatrixTuple<Integers>, grid: &WordGrid) -> Result<BigInt> {
    if t.n() != grid.n() || t.g() < grid.g() {
        return Err(Error::InvalidInput(format!(
            "tuple ({}x{}, g={}) does not fit a grid for n={}, g={}",
            t.n(),
            t.n(),
            t.g(),
            grid.n(),
            grid.g()
        )));
    }
    discriminant_at(&grid.flatten(), t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRun {
    pub spec: WitnessSpec,
    pub matrices: Vec<MatrixRecord>,
    #[serde(serialize_with = "as_decimal")]
    pub discriminant: BigInt,
    pub escalations: usize,
    pub certified: bool,
}

/// Builds and verifies a witness, squaring the base after each vanishing
/// discriminant, at most `max_escalations` times. With `force_base` the hint
/// is used even below the default minimum.
pub fn certify_witness(
    n: usize,
    g: usize,
    base_hint: u64,
    force_base: bool,
    max_escalations: usize,
) -> Result<WitnessRun> {
    certify_witness_with(n, g, base_hint, force_base, max_escalations, verify_witness)
}

/// [`certify_witness`] with a caller-supplied verifier.
pub fn certify_witness_with<F>(
    n: usize,
    g: usize,
    base_hint: u64,
    force_base: bool,
    max_escalations: usize,
    verify: F,
) -> Result<WitnessRun>
where
    F: Fn(&MatrixTuple<Integers>, &WordGrid) -> Result<BigInt>,
{
    if n < 2 || g < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and g >= 2, got n={n}, g={g}"
        )));
    }
    let grid = build_word_grid(n, g)?;
    let mut base = if force_base {
        BigInt::from(base_hint)
    } else {
        BigInt::from(base_hint.max(minimum_base(n, g)))
    };
    let mut escalations = 0;
    loop {
        let (spec, tuple) = build_witness_with_base(n, g, &base)?;
        let disc = verify(&tuple, &grid)?;
        let certified = !disc.is_zero();
        if certified || escalations == max_escalations {
            return Ok(WitnessRun {
                spec,
                matrices: tuple.to_records(),
                discriminant: disc,
                escalations,
                certified,
            });
        }
        base = &base * &base;
        escalations += 1;
    }
}

/// Reduces the integer witness modulo `p` and evaluates the grid
/// discriminant there. A nonzero residue also certifies the integer value.
pub fn witness_discriminant_mod(
    t: &MatrixTuple<Integers>,
    grid: &WordGrid,
    field: PrimeField,
) -> Result<u64> {
    discriminant_at(&grid.flatten(), &t.reduce_mod(field))
}

/// The exponent-table constants exactly as printed for the explicit
/// construction, with `g_bar` the smallest `m` such that `m^d >= n`. Only
/// reported, never used to build matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedConstants {
    pub label: &'static str,
    pub n: usize,
    pub g: usize,
    pub d: usize,
    pub g_bar: usize,
    #[serde(serialize_with = "as_decimal")]
    pub m_constant: BigUint,
    /// `c_1 = 3`, `c_s = 2 g_bar^{s-1} (g_bar - 1) + g_bar^{s-2}` for `s > 1`.
    pub c: Vec<u64>,
    pub c_total: u64,
}

pub fn printed_constants(n: usize, g: usize) -> Result<PrintedConstants> {
    if n < 2 || g < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and g >= 2, got n={n}, g={g}"
        )));
    }
    let d = ceil_log(g, n);
    let g_bar = (1..=g)
        .find(|&m| (m as u128).pow(d as u32) >= n as u128)
        .expect("g^d >= n");
    let gb = g_bar as u64;
    let c: Vec<u64> = (1..=d)
        .map(|s| {
            if s == 1 {
                3
            } else {
                2 * gb.pow(s as u32 - 1) * (gb - 1) + gb.pow(s as u32 - 2)
            }
        })
        .collect();
    Ok(PrintedConstants {
        label: "as printed",
        n,
        g,
        d,
        g_bar,
        m_constant: m_constant(n, d),
        c_total: c.iter().sum(),
        c,
    })
}

/// `true` if every entry off the support is zero.
pub fn respects_support(spec: &WitnessSpec, t: &MatrixTuple<Integers>) -> bool {
    let ring = Integers;
    t.matrices().iter().enumerate().all(|(k, m)| {
        (0..spec.n).all(|i| {
            (0..spec.n).all(|j| {
                let on = spec
                    .support
                    .iter()
                    .any(|e| e.letter == k + 1 && e.row == i + 1 && e.col == j + 1);
                on != ring.is_zero(m.get(i, j))
            })
        })
    })
}

impl WitnessSpec {
    pub fn base_is_one(&self) -> bool {
        self.base.is_one()
    }
}
