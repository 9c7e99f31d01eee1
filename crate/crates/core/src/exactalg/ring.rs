//! Exact scalar rings: prime fields with a word-sized modulus and the
//! arbitrary-precision integers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Mersenne prime 2^61 - 1, default modulus for randomized certification.
pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

/// Serializable description of a scalar ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarRing {
    PrimeField { p: u64 },
    BigInteger,
}

impl std::fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarRing::PrimeField { p } => write!(f, "F_{p}"),
            ScalarRing::BigInteger => f.write_str("Z"),
        }
    }
}

/// A commutative ring with exact arithmetic.
///
/// Elements are plain values; the ring object carries whatever context the
/// arithmetic needs (the modulus for prime fields). The two elimination hooks
/// let the dense linear algebra pick the right algorithm per ring: Gaussian
/// elimination over fields, fraction-free elimination over the integers.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn descriptor(&self) -> ScalarRing;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn to_decimal(&self, a: &Self::Elem) -> String;
    fn parse_decimal(&self, s: &str) -> Result<Self::Elem>;

    /// Determinant of the square matrix given by `rows`.
    fn determinant(&self, rows: Vec<Vec<Self::Elem>>) -> Self::Elem;

    /// Clears `row[col]` using `pivot_row`, whose entry at `col` is nonzero.
    fn eliminate(&self, row: &mut [Self::Elem], pivot_row: &[Self::Elem], col: usize);

    /// Prepares a freshly found pivot row for storage in an echelon basis.
    fn normalize_pivot_row(&self, row: &mut [Self::Elem], col: usize);

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        *acc = self.add(acc, &t);
    }
}

/// The prime field F_p with p < 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 {
            return Err(Error::InvalidModulus(p, "modulus must be below 2^62"));
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p, "modulus is not prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn mersenne61() -> Self {
        PrimeField { p: MERSENNE_61 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_big(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        // mod_floor with a positive modulus lands in [0, p)
        r.try_into().expect("residue fits in u64")
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        let (mut old_r, mut r) = (a as i128, self.p as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        old_s.rem_euclid(self.p as i128) as u64
    }

    /// Uniform element of the field.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> u64 {
        rng.random_range(0..self.p)
    }

    #[inline]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let prod = a as u128 * b as u128;
        if self.p == MERSENNE_61 {
            let lo = (prod as u64) & MERSENNE_61;
            let hi = (prod >> 61) as u64;
            let mut r = lo + hi;
            if r >= MERSENNE_61 {
                r -= MERSENNE_61;
            }
            if r >= MERSENNE_61 {
                r -= MERSENNE_61;
            }
            r
        } else {
            (prod % self.p as u128) as u64
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> ScalarRing {
        ScalarRing::PrimeField { p: self.p }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn to_decimal(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_decimal(&self, s: &str) -> Result<u64> {
        let v: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))?;
        Ok(self.reduce_big(&v))
    }

    fn determinant(&self, mut rows: Vec<Vec<u64>>) -> u64 {
        let n = rows.len();
        let mut det = self.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| rows[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                rows.swap(piv, col);
                det = self.neg(&det);
            }
            let pivot = rows[col][col];
            det = self.mul(&det, &pivot);
            let inv = self.inv(pivot);
            let (upper, lower) = rows.split_at_mut(col + 1);
            let pivot_row = &upper[col];
            for row in lower.iter_mut() {
                if row[col] == 0 {
                    continue;
                }
                let factor = self.mul(&row[col], &inv);
                for c in col..n {
                    let t = self.mul(&factor, &pivot_row[c]);
                    row[c] = self.sub(&row[c], &t);
                }
            }
        }
        det
    }

    fn eliminate(&self, row: &mut [u64], pivot_row: &[u64], col: usize) {
        if row[col] == 0 {
            return;
        }
        let factor = if pivot_row[col] == 1 {
            row[col]
        } else {
            self.mul(&row[col], &self.inv(pivot_row[col]))
        };
        for (r, p) in row.iter_mut().zip(pivot_row).skip(col) {
            if *p != 0 {
                let t = self.mul(&factor, p);
                *r = self.sub(r, &t);
            }
        }
    }

    fn normalize_pivot_row(&self, row: &mut [u64], col: usize) {
        let inv = self.inv(row[col]);
        for v in row.iter_mut().skip(col) {
            *v = self.mul(v, &inv);
        }
    }
}

/// The ring of integers with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> ScalarRing {
        ScalarRing::BigInteger
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn to_decimal(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse_decimal(&self, s: &str) -> Result<BigInt> {
        s.trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
    }

    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }

    /// Bareiss fraction-free elimination; every division is exact.
    fn determinant(&self, mut rows: Vec<Vec<BigInt>>) -> BigInt {
        let n = rows.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !rows[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if piv != k {
                rows.swap(piv, k);
                negate = !negate;
            }
            let (upper, lower) = rows.split_at_mut(k + 1);
            let pivot_row = &upper[k];
            let pivot = &pivot_row[k];
            for row in lower.iter_mut() {
                let lead = std::mem::take(&mut row[k]);
                for c in k + 1..n {
                    let mut v = &row[c] * pivot;
                    if !lead.is_zero() && !pivot_row[c].is_zero() {
                        v -= &lead * &pivot_row[c];
                    }
                    if !v.is_zero() && !prev.is_one() {
                        v /= &prev;
                    }
                    row[c] = v;
                }
            }
            prev = rows[k][k].clone();
        }
        let det = rows[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    fn eliminate(&self, row: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
        if row[col].is_zero() {
            return;
        }
        let lead = row[col].clone();
        let pivot = &pivot_row[col];
        for (r, p) in row.iter_mut().zip(pivot_row).skip(col) {
            let mut v = &*r * pivot;
            if !p.is_zero() {
                v -= &lead * p;
            }
            *r = v;
        }
        // divide out the content to keep entries from growing across insertions
        let content = row
            .iter()
            .filter(|v| !v.is_zero())
            .fold(BigInt::zero(), |g, v| g.gcd(v));
        if !content.is_zero() && !content.is_one() {
            for v in row.iter_mut() {
                *v /= &content;
            }
        }
    }

    fn normalize_pivot_row(&self, _row: &mut [BigInt], _col: usize) {}
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
