use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ring::{Integers, PrimeField, Ring, ScalarRing};
use crate::error::{Error, Result};
use crate::words::Word;

/// Dense matrix over an exact ring, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    entries: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_entries(ring: R, rows: usize, cols: usize, entries: Vec<R::Elem>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from small integer rows, reducing into the ring.
    pub fn from_i64_rows(ring: R, rows: &[&[i64]]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| ring.from_i64(v)))
            .collect();
        Self::from_entries(ring, n_rows, n_cols, entries)
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let entries = vec![ring.zero(); rows * cols];
        Matrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = m.ring.one();
        }
        m
    }

    /// The matrix unit with a one at zero-based position `(i, j)`.
    pub fn unit(ring: R, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        m.entries[i * n + j] = m.ring.one();
        m
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R::Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<R::Elem> {
        self.entries
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| self.ring.is_zero(v))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let entries = self.entries.iter().map(|v| self.ring.mul(c, v)).collect();
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return Err(Error::InvalidInput(
                "matrix sum of incompatible operands".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::InvalidShape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = &self.ring;
        let mut out = Self::zeros(ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                let row_b = &other.entries[k * other.cols..(k + 1) * other.cols];
                let row_out = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    ring.mul_add_assign(o, a, b);
                }
            }
        }
        Ok(out)
    }

    /// Row-major vectorization: position `(i-1)*n + j` holds entry `(i, j)`.
    pub fn vectorize(&self) -> Result<Vec<R::Elem>> {
        if !self.is_square() {
            return Err(Error::InvalidShape(format!(
                "vectorize needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.entries.clone())
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn from_vector(ring: R, n: usize, v: Vec<R::Elem>) -> Result<Self> {
        Self::from_entries(ring, n, n, v)
    }

    pub fn to_record(&self) -> Result<MatrixRecord> {
        if !self.is_square() {
            return Err(Error::InvalidShape("only square matrices serialize".into()));
        }
        Ok(MatrixRecord {
            n: self.rows,
            ring: self.ring.descriptor(),
            entries: self
                .entries
                .iter()
                .map(|v| self.ring.to_decimal(v))
                .collect(),
        })
    }

    pub fn from_record(ring: R, rec: &MatrixRecord) -> Result<Self> {
        if rec.ring != ring.descriptor() {
            return Err(Error::InvalidInput(format!(
                "record over {} cannot be read into {}",
                rec.ring,
                ring.descriptor()
            )));
        }
        let entries = rec
            .entries
            .iter()
            .map(|s| ring.parse_decimal(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(ring, rec.n, rec.n, entries)
    }
}

impl Matrix<PrimeField> {
    pub fn random<G: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut G) -> Self {
        let entries = (0..n * n).map(|_| field.sample(rng)).collect();
        Matrix {
            ring: field,
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Uniform symmetric matrix: the upper triangle is sampled and mirrored.
    pub fn random_symmetric<G: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut G) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            for j in i..n {
                let v = field.sample(rng);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }
}

impl Matrix<Integers> {
    pub fn reduce_mod(&self, field: PrimeField) -> Matrix<PrimeField> {
        let entries = self.entries.iter().map(|v| field.reduce_big(v)).collect();
        Matrix {
            ring: field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn from_big_entries(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        Self::from_entries(Integers, n, n, entries)
    }
}

/// JSON form of a square matrix; entries are decimal strings so that big
/// integers survive the round trip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub n: usize,
    pub ring: ScalarRing,
    pub entries: Vec<String>,
}

/// A g-tuple of n x n matrices over a common ring.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple<R: Ring> {
    matrices: Vec<Matrix<R>>,
}

impl<R: Ring> MatrixTuple<R> {
    pub fn new(matrices: Vec<Matrix<R>>) -> Result<Self> {
        if matrices.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a tuple needs at least two matrices, got {}",
                matrices.len()
            )));
        }
        let first = &matrices[0];
        if !first.is_square() {
            return Err(Error::InvalidShape("tuple matrices must be square".into()));
        }
        for m in &matrices[1..] {
            if !m.is_square() || m.rows != first.rows {
                return Err(Error::InvalidShape(
                    "tuple matrices must share their size".into(),
                ));
            }
            if m.ring != first.ring {
                return Err(Error::InvalidInput(
                    "tuple matrices must share their ring".into(),
                ));
            }
        }
        Ok(MatrixTuple { matrices })
    }

    pub fn g(&self) -> usize {
        self.matrices.len()
    }

    pub fn n(&self) -> usize {
        self.matrices[0].rows
    }

    pub fn ring(&self) -> &R {
        &self.matrices[0].ring
    }

    pub fn matrices(&self) -> &[Matrix<R>] {
        &self.matrices
    }

    /// Letter `k` is one-based.
    pub fn letter(&self, k: usize) -> &Matrix<R> {
        &self.matrices[k - 1]
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        MatrixTuple {
            matrices: self.matrices.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn to_records(&self) -> Vec<MatrixRecord> {
        self.matrices
            .iter()
            .map(|m| m.to_record().expect("tuple matrices are square"))
            .collect()
    }
}

impl MatrixTuple<PrimeField> {
    pub fn random<G: Rng + ?Sized>(
        field: PrimeField,
        n: usize,
        g: usize,
        symmetric: bool,
        rng: &mut G,
    ) -> Self {
        let matrices = (0..g)
            .map(|_| {
                if symmetric {
                    Matrix::random_symmetric(field, n, rng)
                } else {
                    Matrix::random(field, n, rng)
                }
            })
            .collect();
        MatrixTuple { matrices }
    }
}

impl MatrixTuple<Integers> {
    pub fn reduce_mod(&self, field: PrimeField) -> MatrixTuple<PrimeField> {
        MatrixTuple {
            matrices: self.matrices.iter().map(|m| m.reduce_mod(field)).collect(),
        }
    }
}

/// Evaluates `w` at the tuple: the product of the tuple's matrices in the
/// order of the word's letters.
pub fn evaluate_word<R: Ring>(w: &Word, t: &MatrixTuple<R>) -> Result<Matrix<R>> {
    if w.is_empty() {
        return Err(Error::InvalidWord("cannot evaluate the empty word".into()));
    }
    if let Some(&bad) = w.letters().iter().find(|&&l| l == 0 || l > t.g()) {
        return Err(Error::InvalidWord(format!(
            "letter {bad} out of range for a {}-tuple",
            t.g()
        )));
    }
    let letters = w.letters();
    let mut acc = t.letter(letters[0]).clone();
    for &l in &letters[1..] {
        acc = acc.mul(t.letter(l))?;
    }
    Ok(acc)
}

/// Evaluates every word, sharing nothing between words.
pub fn evaluate_words<R: Ring>(words: &[Word], t: &MatrixTuple<R>) -> Result<Vec<Matrix<R>>> {
    words.iter().map(|w| evaluate_word(w, t)).collect()
}
