//! Python bindings. Reports come back as plain dicts and lists; exact
//! integers (discriminants, witness entries) come back as Python ints.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

use sweepwords_core::exactalg::{
    self, evaluate_word as core_evaluate_word, Integers, Matrix, MatrixTuple, PrimeField,
    MERSENNE_61,
};
use sweepwords_core::genericity;
use sweepwords_core::graphs::{self, LabeledMultigraph};
use sweepwords_core::witness as core_witness;
use sweepwords_core::words::{self, Word};
use sweepwords_core::Error;

create_exception!(sweepwords, BudgetExceeded, PyRuntimeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(json_to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(m) => {
            let dict = PyDict::new(py);
            for (k, x) in m {
                dict.set_item(k, json_to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

fn parse_words(words: &[String], g: usize) -> PyResult<Vec<Word>> {
    words
        .iter()
        .map(|w| Word::parse(w, g).map_err(err))
        .collect()
}

fn integer_tuple(matrices: Vec<Vec<Vec<BigInt>>>) -> PyResult<MatrixTuple<Integers>> {
    MatrixTuple::new(integer_matrices(matrices)?).map_err(err)
}

fn field(prime: u64) -> PyResult<PrimeField> {
    PrimeField::new(prime).map_err(err)
}

fn field_rows(m: &Matrix<PrimeField>) -> Vec<Vec<u64>> {
    (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| *m.get(i, j)).collect())
        .collect()
}

fn integer_rows(m: &Matrix<Integers>) -> Vec<Vec<BigInt>> {
    (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

/// The n x n grid of degree-2d words.
#[pyclass(name = "WordGrid", frozen)]
struct PyWordGrid {
    inner: words::WordGrid,
}

#[pymethods]
impl PyWordGrid {
    #[new]
    #[pyo3(signature = (n, g = 2))]
    fn new(n: usize, g: usize) -> PyResult<Self> {
        Ok(Self {
            inner: words::build_word_grid(n, g).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn g(&self) -> usize {
        self.inner.g()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    /// Entry at 0-based `(i, j)`.
    fn get(&self, i: usize, j: usize) -> PyResult<String> {
        if i >= self.inner.n() || j >= self.inner.n() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(i, j).to_string())
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.inner
            .rows()
            .iter()
            .map(|r| r.iter().map(|w| w.to_string()).collect())
            .collect()
    }

    fn flatten(&self) -> Vec<String> {
        self.inner.flatten().iter().map(|w| w.to_string()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "WordGrid(n={}, g={}, d={})",
            self.inner.n(),
            self.inner.g(),
            self.inner.d()
        )
    }
}

/// The labeled multigraph G_d scaled by m.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: LabeledMultigraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (g, d, m = 1))]
    fn new(g: usize, d: usize, m: u64) -> PyResult<Self> {
        Ok(Self {
            inner: graphs::build_graph(g, d, m).map_err(err)?,
        })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    fn multiplicity(&self, source: usize, target: usize, label: usize) -> u64 {
        self.inner.multiplicity(source, target, label)
    }

    fn label_counts(&self) -> Vec<u64> {
        self.inner.label_counts()
    }

    fn loops_on(&self, v: usize) -> u64 {
        self.inner.loops_on(v)
    }

    /// `(from, to, label, multiplicity)` for every distinct edge.
    fn edges(&self) -> Vec<(usize, usize, usize, u64)> {
        self.inner
            .edges()
            .iter()
            .map(|(e, &m)| (e.from, e.to, e.label, m))
            .collect()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    /// Whether the walks read off the certificate monomial partition this
    /// graph. Only meaningful for `m = 1`.
    fn certificate_partition_valid(&self) -> PyResult<bool> {
        let side = self.inner.g().pow(self.inner.d() as u32);
        let p = graphs::derive_walks_from_certificate(side, self.inner.g()).map_err(err)?;
        Ok(graphs::verify_partition(&self.inner, &p))
    }

    #[pyo3(signature = (budget = 10_000_000, cap = 1_000_000))]
    fn enumerate_partitions<'py>(
        &self,
        py: Python<'py>,
        budget: u64,
        cap: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let out = py
            .detach(|| graphs::enumerate_partitions(&self.inner, cap, budget))
            .map_err(err)?;
        to_py(py, &out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(g={}, d={}, m={}, edges={})",
            self.inner.g(),
            self.inner.d(),
            self.inner.m(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, g = 2))]
fn build_word_grid(n: usize, g: usize) -> PyResult<PyWordGrid> {
    PyWordGrid::new(n, g)
}

/// Randomized certification of the given words (default: the grid words).
#[pyfunction]
#[pyo3(signature = (n, g = 2, prime = MERSENNE_61, trials = 3, seed = 0, words = None))]
fn certify<'py>(
    py: Python<'py>,
    n: usize,
    g: usize,
    prime: u64,
    trials: usize,
    seed: u64,
    words: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let ws = match words {
        Some(w) => parse_words(&w, g)?,
        None => words::build_word_grid(n, g).map_err(err)?.flatten(),
    };
    let report = py
        .detach(|| genericity::is_locally_linearly_independent(&ws, n, g, prime, trials, seed))
        .map_err(err)?;
    to_py(py, &report)
}

/// Discriminant of `words` at integer matrices; exact unless `prime` is given.
#[pyfunction]
#[pyo3(signature = (words, matrices, prime = None))]
fn discriminant<'py>(
    py: Python<'py>,
    words: Vec<String>,
    matrices: Vec<Vec<Vec<BigInt>>>,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = integer_tuple(matrices)?;
    let ws = parse_words(&words, t.g())?;
    match prime {
        None => Ok(genericity::discriminant_at(&ws, &t)
            .map_err(err)?
            .into_pyobject(py)?
            .into_any()),
        Some(p) => {
            let f = field(p)?;
            Ok(genericity::discriminant_at(&ws, &t.reduce_mod(f))
                .map_err(err)?
                .into_pyobject(py)?
                .into_any())
        }
    }
}

/// Value of a word at integer matrices, reduced mod `prime` if given.
#[pyfunction]
#[pyo3(signature = (word, matrices, prime = None))]
fn evaluate_word<'py>(
    py: Python<'py>,
    word: &str,
    matrices: Vec<Vec<Vec<BigInt>>>,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = integer_tuple(matrices)?;
    let w = Word::parse(word, t.g()).map_err(err)?;
    match prime {
        None => Ok(integer_rows(&core_evaluate_word(&w, &t).map_err(err)?)
            .into_pyobject(py)?
            .into_any()),
        Some(p) => {
            let m = core_evaluate_word(&w, &t.reduce_mod(field(p)?)).map_err(err)?;
            Ok(field_rows(&m).into_pyobject(py)?.into_any())
        }
    }
}

/// Rank over F_p of the given integer matrices.
#[pyfunction]
#[pyo3(signature = (matrices, prime = MERSENNE_61))]
fn rank(matrices: Vec<Vec<Vec<BigInt>>>, prime: u64) -> PyResult<usize> {
    let f = field(prime)?;
    let ms: Vec<Matrix<PrimeField>> = integer_matrices(matrices)?
        .iter()
        .map(|m| m.reduce_mod(f))
        .collect();
    exactalg::rank(&ms).map_err(err)
}

fn integer_matrices(matrices: Vec<Vec<Vec<BigInt>>>) -> PyResult<Vec<Matrix<Integers>>> {
    matrices
        .into_iter()
        .map(|rows| {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(PyValueError::new_err("matrices must be square"));
            }
            Matrix::from_big_entries(n, rows.into_iter().flatten().collect()).map_err(err)
        })
        .collect()
}

/// Whether the words span M_n at the given matrices over F_p.
#[pyfunction]
#[pyo3(signature = (words, matrices, prime = MERSENNE_61))]
fn sweep_check(words: Vec<String>, matrices: Vec<Vec<Vec<BigInt>>>, prime: u64) -> PyResult<bool> {
    let t = integer_tuple(matrices)?.reduce_mod(field(prime)?);
    let ws = parse_words(&words, t.g())?;
    genericity::sweep_check(&ws, &t).map_err(err)
}

/// Length chain of the span of the given matrices over F_p.
#[pyfunction]
#[pyo3(signature = (matrices, prime = MERSENNE_61, include_identity = false, max_k = None))]
fn subspace_length<'py>(
    py: Python<'py>,
    matrices: Vec<Vec<Vec<BigInt>>>,
    prime: u64,
    include_identity: bool,
    max_k: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = integer_tuple(matrices)?.reduce_mod(field(prime)?);
    let k = max_k.unwrap_or(t.n() * t.n() + 1);
    to_py(
        py,
        &genericity::subspace_length(&t, k, include_identity).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (n, g = 2, prime = MERSENNE_61, trials = 5, seed = 0, symmetric = false, include_identity = false))]
#[allow(clippy::too_many_arguments)]
fn generic_length_experiment<'py>(
    py: Python<'py>,
    n: usize,
    g: usize,
    prime: u64,
    trials: usize,
    seed: u64,
    symmetric: bool,
    include_identity: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let e = py
        .detach(|| {
            genericity::generic_length_experiment(
                n,
                g,
                prime,
                trials,
                seed,
                symmetric,
                include_identity,
            )
        })
        .map_err(err)?;
    to_py(py, &e)
}

#[pyfunction]
#[pyo3(signature = (n, g, d, prime = MERSENNE_61, seed = 0))]
fn rosenthal_check<'py>(
    py: Python<'py>,
    n: usize,
    g: usize,
    d: usize,
    prime: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let o = py
        .detach(|| genericity::rosenthal_check(n, g, d, prime, seed))
        .map_err(err)?;
    to_py(py, &o)
}

/// Exponents of the certificate monomial, keyed like `x1[1,1]`.
#[pyfunction]
#[pyo3(signature = (n, g = 2))]
fn certificate_monomial(n: usize, g: usize) -> PyResult<Vec<(String, u32)>> {
    let m = words::certificate_monomial(n, g).map_err(err)?;
    Ok(m.exponents()
        .iter()
        .map(|(v, &e)| (v.to_string(), e))
        .collect())
}

/// Builds and verifies the integer witness. Matrices and the discriminant
/// are returned as Python ints.
#[pyfunction]
#[pyo3(signature = (n, g = 2, base = 0, force_base = false, max_escalations = 3))]
fn witness<'py>(
    py: Python<'py>,
    n: usize,
    g: usize,
    base: u64,
    force_base: bool,
    max_escalations: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let run = py
        .detach(|| core_witness::certify_witness(n, g, base, force_base, max_escalations))
        .map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("n", n)?;
    dict.set_item("g", g)?;
    dict.set_item("d", run.spec.d)?;
    dict.set_item("base", run.spec.base.clone())?;
    dict.set_item("support", to_py(py, &run.spec.support)?)?;
    dict.set_item("m_constant", BigInt::from(run.spec.m_constant.clone()))?;
    let ring = Integers;
    let matrices: Vec<Vec<Vec<BigInt>>> = run
        .matrices
        .iter()
        .map(|rec| Matrix::from_record(ring, rec).map(|m| integer_rows(&m)))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    dict.set_item("matrices", matrices)?;
    dict.set_item("discriminant", run.discriminant.clone())?;
    dict.set_item("escalations", run.escalations)?;
    dict.set_item("certified", run.certified)?;
    Ok(dict.into_any())
}

/// Runs the command-line interface in-process; returns `(code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let out = py.detach(|| {
        sweepwords_core::cli::run_args(std::iter::once("sweepwords".to_string()).chain(args))
    });
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn sweepwords(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MERSENNE_61", MERSENNE_61)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_class::<PyWordGrid>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(build_word_grid, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_word, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_check, m)?)?;
    m.add_function(wrap_pyfunction!(subspace_length, m)?)?;
    m.add_function(wrap_pyfunction!(generic_length_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(rosenthal_check, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
