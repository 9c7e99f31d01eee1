//! Words over a finite alphabet, the degree-2d word grid, and the monomial
//! that certifies the grid's discriminant is not identically zero.
//!
//! Letters are one-based: letter 1 is `x` (`x_1`), letter 2 is `y` (`x_2`) and
//! so on. Words print as strings over `a, b, c, ...` with `a` = letter 1.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the free monoid on `g` letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
    g: usize,
}

impl Word {
    pub fn new(letters: Vec<usize>, g: usize) -> Result<Self> {
        if g == 0 || g > 26 {
            return Err(Error::InvalidWord(format!(
                "alphabet size {g} outside 1..=26"
            )));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > g) {
            return Err(Error::InvalidWord(format!("letter {bad} outside 1..={g}")));
        }
        Ok(Word { letters, g })
    }

    /// The empty word.
    pub fn identity(g: usize) -> Self {
        Word {
            letters: Vec::new(),
            g,
        }
    }

    /// Parses `"abba"`-style strings; `a` is letter 1.
    pub fn parse(s: &str, g: usize) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as usize - 'a' as usize + 1)
                } else {
                    Err(Error::InvalidWord(format!(
                        "unexpected character {c:?} in {s:?}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, g)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            g: self.g.max(other.g),
        }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters, g: self.g }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", (b'a' + (l - 1) as u8) as char)?;
        }
        Ok(())
    }
}

/// Smallest `d` with `g^d >= n`.
pub fn ceil_log(g: usize, n: usize) -> usize {
    assert!(g >= 2, "logarithm base must be at least 2");
    let mut d = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(g);
        d += 1;
    }
    d
}

/// All `g^s` words of degree `s`, strictly decreasing in the lexicographic
/// order with `x_1 > x_2 > ... > x_g`.
pub fn all_words(g: usize, s: usize) -> Vec<Word> {
    assert!(g >= 1);
    let total = g.pow(s as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![1usize; s];
    for _ in 0..total {
        out.push(Word {
            letters: cur.clone(),
            g,
        });
        // odometer, last position fastest
        for pos in (0..s).rev() {
            if cur[pos] < g {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 1;
        }
    }
    out
}

/// The n x n grid of degree-2d words whose row-major flattening is the
/// locally linearly independent family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGrid {
    n: usize,
    g: usize,
    d: usize,
    grid: Vec<Vec<Word>>,
}

/// JSON form: `{n, g, d, grid: [[string]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordGridRecord {
    pub n: usize,
    pub g: usize,
    pub d: usize,
    pub grid: Vec<Vec<String>>,
}

impl WordGrid {
    /// Wraps an arbitrary square grid of words of one common even degree.
    pub fn from_rows(g: usize, grid: Vec<Vec<Word>>) -> Result<Self> {
        let n = grid.len();
        if n == 0 || grid.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidShape(
                "word grid must be square and nonempty".into(),
            ));
        }
        let deg = grid[0][0].degree();
        if !deg.is_multiple_of(2) {
            return Err(Error::InvalidWord(format!(
                "grid words must have even degree, got {deg}"
            )));
        }
        for w in grid.iter().flatten() {
            if w.degree() != deg {
                return Err(Error::InvalidWord(
                    "grid words must share one degree".into(),
                ));
            }
            if w.letters.iter().any(|&l| l > g) {
                return Err(Error::InvalidWord(format!(
                    "word {w} uses a letter beyond {g}"
                )));
            }
        }
        Ok(WordGrid {
            n,
            g,
            d: deg / 2,
            grid,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &Word {
        &self.grid[i][j]
    }

    pub fn rows(&self) -> &[Vec<Word>] {
        &self.grid
    }

    /// Row-major flattening: `w_{(i-1)n+j} = grid[i][j]`.
    pub fn flatten(&self) -> Vec<Word> {
        self.grid.iter().flatten().cloned().collect()
    }

    pub fn swap_entries(&mut self, a: (usize, usize), b: (usize, usize)) {
        let wa = self.grid[a.0][a.1].clone();
        self.grid[a.0][a.1] = std::mem::replace(&mut self.grid[b.0][b.1], wa);
    }

    pub fn to_record(&self) -> WordGridRecord {
        WordGridRecord {
            n: self.n,
            g: self.g,
            d: self.d,
            grid: self
                .grid
                .iter()
                .map(|r| r.iter().map(|w| w.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_record(rec: &WordGridRecord) -> Result<Self> {
        let grid = rec
            .grid
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Word::parse(s, rec.g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let out = WordGrid::from_rows(rec.g, grid)?;
        if out.n != rec.n || out.d != rec.d {
            return Err(Error::InvalidInput(
                "grid record header disagrees with its words".into(),
            ));
        }
        Ok(out)
    }
}

/// Builds the word grid for `n x n` matrices in `g` letters.
///
/// With `d = ceil(log_g n)` and `v_d` the decreasing list of degree-d words,
/// entry `(i, j)` of the full `g^d x g^d` grid is `v_d[i] . reverse(v_d[j])`,
/// which unfolds to `x_a . grid_{d-1}[i_d][j_d] . x_b` where `a`, `b` are the
/// block indices of `i`, `j`. For `n < g^d` the leading principal `n x n`
/// subgrid is returned.
pub fn build_word_grid(n: usize, g: usize) -> Result<WordGrid> {
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "alphabet size must be at least 2, got {g}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "matrix size must be at least 2, got {n}"
        )));
    }
    let d = ceil_log(g, n);
    let v = all_words(g, d);
    let grid = (0..n)
        .map(|i| (0..n).map(|j| v[i].concat(&v[j].reversed())).collect())
        .collect();
    Ok(WordGrid { n, g, d, grid })
}

/// The entry variable `x^{(letter)}_{row,col}` of the generic matrix for a
/// letter (all indices one-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variable {
    pub letter: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}[{},{}]", self.letter, self.row, self.col)
    }
}

/// A commutative monomial in the entry variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommMonomial {
    exponents: BTreeMap<Variable, u32>,
}

impl CommMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_variables<I: IntoIterator<Item = Variable>>(vars: I) -> Self {
        let mut m = Self::one();
        for v in vars {
            m.multiply_variable(v, 1);
        }
        m
    }

    pub fn multiply_variable(&mut self, v: Variable, e: u32) {
        if e > 0 {
            *self.exponents.entry(v).or_insert(0) += e;
        }
    }

    pub fn mul(&self, other: &CommMonomial) -> CommMonomial {
        let mut out = self.clone();
        for (&v, &e) in &other.exponents {
            out.multiply_variable(v, e);
        }
        out
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.exponents.get(v).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.exponents.values().map(|&e| e as u64).sum()
    }

    pub fn exponents(&self) -> &BTreeMap<Variable, u32> {
        &self.exponents
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.exponents.keys()
    }

    pub fn divides(&self, other: &CommMonomial) -> bool {
        self.exponents.iter().all(|(v, &e)| other.exponent(v) >= e)
    }
}

impl fmt::Display for CommMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in &self.exponents {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Ordered factor of the certificate monomial for grid cell `(i, j)`
/// (one-based) of the full `g^d x g^d` grid.
///
/// The variables trace an index path `i -> ... -> j` of length `2d`: the
/// outer step leaves block `a` of `i` for its residue `i_d`, the middle is the
/// level `d-1` path from `i_d` to `j_d`, and the last step enters `j` from
/// `j_d`. Steps of letter 1 are loops, since `X_1` is taken diagonal.
pub fn certificate_path(g: usize, d: usize, i: usize, j: usize) -> Vec<Variable> {
    let side = g.pow(d as u32);
    assert!((1..=side).contains(&i) && (1..=side).contains(&j));
    let mut head = Vec::with_capacity(d);
    let mut tail = Vec::with_capacity(d);
    let (mut i, mut j) = (i, j);
    for level in (1..=d).rev() {
        let h = g.pow(level as u32 - 1);
        let (a, i_res) = block_and_residue(i, h);
        let (b, j_res) = block_and_residue(j, h);
        head.push(Variable {
            letter: a,
            row: i,
            col: i_res,
        });
        tail.push(Variable {
            letter: b,
            row: j_res,
            col: j,
        });
        i = i_res;
        j = j_res;
    }
    debug_assert_eq!((i, j), (1, 1));
    tail.reverse();
    head.extend(tail);
    head
}

/// One-based block index and residue in `[1, h]`.
pub(crate) fn block_and_residue(i: usize, h: usize) -> (usize, usize) {
    let block = (i - 1) / h + 1;
    (block, i - (block - 1) * h)
}

/// The certificate monomial `m_n`: the product over `1 <= i, j <= n` of the
/// cell factors from [`certificate_path`], with `d = ceil(log_g n)`.
pub fn certificate_monomial(n: usize, g: usize) -> Result<CommMonomial> {
    if g < 2 || n < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and g >= 2, got n={n}, g={g}"
        )));
    }
    let d = ceil_log(g, n);
    let mut m = CommMonomial::one();
    for i in 1..=n {
        for j in 1..=n {
            for v in certificate_path(g, d, i, j) {
                m.multiply_variable(v, 1);
            }
        }
    }
    Ok(m)
}

/// Polynomial with integer coefficients in the entry variables.
pub type Polynomial = BTreeMap<CommMonomial, i64>;

/// Entry `(i, j)` (one-based) of `w(X_1, ..., X_g)` for generic `n x n`
/// matrices with `X_1` diagonal, keeping only monomials that divide `bound`.
pub fn entry_polynomial(
    w: &Word,
    n: usize,
    i: usize,
    j: usize,
    bound: &CommMonomial,
) -> Polynomial {
    // state: current row index -> polynomial of the partial product
    let mut frontier: BTreeMap<usize, Polynomial> = BTreeMap::new();
    frontier.insert(i, Polynomial::from([(CommMonomial::one(), 1)]));
    for &letter in w.letters() {
        let mut next: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (row, poly) in &frontier {
            let cols: Vec<usize> = if letter == 1 {
                vec![*row]
            } else {
                (1..=n).collect()
            };
            for col in cols {
                let var = Variable {
                    letter,
                    row: *row,
                    col,
                };
                if bound.exponent(&var) == 0 {
                    continue;
                }
                let target = next.entry(col).or_default();
                for (mono, c) in poly {
                    let mut m = mono.clone();
                    m.multiply_variable(var, 1);
                    if m.exponent(&var) > bound.exponent(&var) {
                        continue;
                    }
                    *target.entry(m).or_insert(0) += c;
                }
            }
        }
        frontier = next;
    }
    frontier.remove(&j).unwrap_or_default()
}

fn poly_mul_bounded(a: &Polynomial, b: &Polynomial, bound: &CommMonomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb);
            if m.divides(bound) {
                *out.entry(m).or_insert(0) += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let Some(p) = (0..k.saturating_sub(1))
            .rev()
            .find(|&p| cur[p] < cur[p + 1])
        else {
            break;
        };
        let q = (p + 1..k)
            .rev()
            .find(|&q| cur[q] > cur[p])
            .expect("successor exists");
        cur.swap(p, q);
        cur[p + 1..].reverse();
    }
    out
}

/// Outcome of the brute-force permutation expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoefficientScan {
    /// Coefficient of the monomial in the identity-permutation product.
    pub coeff_identity: i64,
    /// Non-identity permutations whose product contains the monomial.
    pub other_permutation_hits: usize,
}

/// Expands `prod_{i,j} w_{s(k_ij)}(X)_{ij}` symbolically for every
/// permutation `s` of the `n²` grid words and reports where `m` occurs.
/// Only `n <= 2` is accepted (24 permutations).
pub fn monomial_coefficient_bruteforce(
    grid: &WordGrid,
    m: &CommMonomial,
) -> Result<CoefficientScan> {
    let n = grid.n();
    if n > 2 {
        return Err(Error::TooLarge(format!(
            "the permutation expansion is capped at n = 2, got n = {n}"
        )));
    }
    let words = grid.flatten();
    let cells: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    // entry[k][c] = entry polynomial of word k at cell c
    let entry: Vec<Vec<Polynomial>> = words
        .iter()
        .map(|w| {
            cells
                .iter()
                .map(|&(i, j)| entry_polynomial(w, n, i, j, m))
                .collect()
        })
        .collect();
    let mut coeff_identity = 0;
    let mut hits = 0;
    for sigma in permutations(n * n) {
        let mut acc = Polynomial::from([(CommMonomial::one(), 1)]);
        for (c, &k) in sigma.iter().enumerate() {
            acc = poly_mul_bounded(&acc, &entry[k][c], m);
            if acc.is_empty() {
                break;
            }
        }
        let coeff = acc.get(m).copied().unwrap_or(0);
        if sigma.iter().enumerate().all(|(a, &b)| a == b) {
            coeff_identity = coeff;
        } else if coeff != 0 {
            hits += 1;
        }
    }
    Ok(CoefficientScan {
        coeff_identity,
        other_permutation_hits: hits,
    })
}
