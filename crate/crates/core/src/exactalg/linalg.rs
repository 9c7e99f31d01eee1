use super::matrix::Matrix;
use super::ring::Ring;
use crate::error::{Error, Result};

fn common_size<R: Ring>(ms: &[Matrix<R>]) -> Result<Option<(usize, R)>> {
    let Some(first) = ms.first() else {
        return Ok(None);
    };
    if !first.is_square() {
        return Err(Error::InvalidInput("matrices must be square".into()));
    }
    let n = first.n_rows();
    for m in ms {
        if !m.is_square() || m.n_rows() != n {
            return Err(Error::InvalidInput("matrices must share one size".into()));
        }
        if m.ring() != first.ring() {
            return Err(Error::InvalidInput("matrices must share one ring".into()));
        }
    }
    Ok(Some((n, first.ring().clone())))
}

/// Determinant of the n² x n² matrix whose k-th column is `vectorize(ms[k])`.
///
/// Over a prime field this is Gaussian elimination; over the integers it is
/// Bareiss elimination, so the result is exact.
pub fn discriminant<R: Ring>(ms: &[Matrix<R>]) -> Result<R::Elem> {
    let Some((n, ring)) = common_size(ms)? else {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: 0,
        });
    };
    let dim = n * n;
    if ms.len() != dim {
        return Err(Error::ArityMismatch {
            expected: dim,
            got: ms.len(),
        });
    }
    // det(M) = det(M^T): use the vectorized matrices as rows
    let rows = ms.iter().map(|m| m.entries().to_vec()).collect();
    Ok(ring.determinant(rows))
}

/// Rank of the vectorized collection; `n²` exactly when the matrices span M_n.
pub fn rank<R: Ring>(ms: &[Matrix<R>]) -> Result<usize> {
    let Some((n, ring)) = common_size(ms)? else {
        return Ok(0);
    };
    let mut basis = SubspaceBasis::new(ring, n);
    for m in ms {
        basis.insert(m)?;
        if basis.is_full() {
            break;
        }
    }
    Ok(basis.dim())
}

/// A linearly independent list of n x n matrices together with an echelon
/// form of their vectorizations.
///
/// Echelon rows are kept in insertion order; each row is zero at the pivot
/// columns of all earlier rows, so reducing a candidate against the rows in
/// order clears every pivot column.
#[derive(Debug, Clone)]
pub struct SubspaceBasis<R: Ring> {
    ring: R,
    n: usize,
    basis: Vec<Matrix<R>>,
    echelon: Vec<(usize, Vec<R::Elem>)>,
}

impl<R: Ring> SubspaceBasis<R> {
    pub fn new(ring: R, n: usize) -> Self {
        SubspaceBasis {
            ring,
            n,
            basis: Vec::new(),
            echelon: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n * self.n
    }

    pub fn basis(&self) -> &[Matrix<R>] {
        &self.basis
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.echelon.iter().map(|(p, _)| *p)
    }

    fn check(&self, m: &Matrix<R>) -> Result<()> {
        if !m.is_square() || m.n_rows() != self.n {
            return Err(Error::InvalidInput(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.n,
                m.n_rows(),
                m.n_cols()
            )));
        }
        if m.ring() != &self.ring {
            return Err(Error::InvalidInput("ring mismatch".into()));
        }
        Ok(())
    }

    fn reduce(&self, m: &Matrix<R>) -> Vec<R::Elem> {
        let mut v = m.entries().to_vec();
        for (col, row) in &self.echelon {
            self.ring.eliminate(&mut v, row, *col);
        }
        v
    }

    /// `true` if `m` lies in the span.
    pub fn contains(&self, m: &Matrix<R>) -> Result<bool> {
        self.check(m)?;
        Ok(self.reduce(m).iter().all(|v| self.ring.is_zero(v)))
    }

    /// Adds `m` if it is independent of the current basis; returns whether
    /// the dimension grew.
    pub fn insert(&mut self, m: &Matrix<R>) -> Result<bool> {
        self.check(m)?;
        let mut v = self.reduce(m);
        let Some(col) = v.iter().position(|x| !self.ring.is_zero(x)) else {
            return Ok(false);
        };
        self.ring.normalize_pivot_row(&mut v, col);
        self.echelon.push((col, v));
        self.basis.push(m.clone());
        Ok(true)
    }
}

/// Functional form of [`SubspaceBasis::insert`].
pub fn span_insert<R: Ring>(
    mut b: SubspaceBasis<R>,
    m: &Matrix<R>,
) -> Result<(SubspaceBasis<R>, bool)> {
    let inserted = b.insert(m)?;
    Ok((b, inserted))
}
