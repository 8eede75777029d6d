//! Python bindings, built as the extension module `holoroot_py`.
//!
//! The module exposes the coefficient table, the Newton-iteration oracle,
//! the named verification suites and the exponent-vector helpers. All the
//! arithmetic stays in Rust; values cross the boundary as strings (exact
//! rationals), floats, complex numbers and dicts. Rust-side assertions are
//! turned into Python exceptions at the edge, so no input reachable from
//! Python can panic the interpreter.

use holoroot::multiindex::{self, Chart, MultiIndex, QRKey, SurfacePoint};
use holoroot::oracle::{self, OracleError, ShiftedPolynomial};
use holoroot::polyring::rational_to_f64;
use holoroot::taylor::{self, CoeffTable};
use holoroot::verify::{run_target, Target};
use holoroot::weyl;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn require_k(k: usize) -> PyResult<()> {
    if k < 2 {
        return Err(PyValueError::new_err("k must be at least 2"));
    }
    Ok(())
}

fn require_sigma_len(k: usize, sigma: &[Complex64]) -> PyResult<()> {
    if sigma.len() != k {
        return Err(PyValueError::new_err(format!(
            "expected {k} elementary symmetric values, got {}",
            sigma.len()
        )));
    }
    Ok(())
}

fn oracle_err(e: OracleError) -> PyErr {
    match e {
        OracleError::SigmaLength { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Exact table of Taylor coefficients C_{q,r} for one degree k.
#[pyclass(name = "CoeffTable", module = "holoroot_py")]
struct PyCoeffTable {
    inner: CoeffTable,
}

#[pymethods]
impl PyCoeffTable {
    /// Build the full table for degree `k` up to series order `q_max`.
    #[staticmethod]
    fn build(k: usize, q_max: u32) -> PyResult<Self> {
        require_k(k)?;
        Ok(PyCoeffTable {
            inner: taylor::build_table(k, q_max),
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn q_max(&self) -> u32 {
        self.inner.q_max()
    }

    /// The exact value C_{q,r} as a `(numerator, denominator)` string pair,
    /// or None outside the stored rectangle.
    fn entry(&self, q: u32, r: u32) -> Option<(String, String)> {
        self.inner
            .coefficient(q, r)
            .map(|c| (c.numer().to_string(), c.denom().to_string()))
    }

    /// The same entry rounded to a float, or None outside the rectangle.
    fn entry_f64(&self, q: u32, r: u32) -> Option<f64> {
        self.inner.coefficient(q, r).map(rational_to_f64)
    }

    /// Evaluate the truncated root series at a list of k sigma values.
    fn root(&self, sigma: Vec<Complex64>) -> PyResult<Complex64> {
        require_sigma_len(self.inner.k(), &sigma)?;
        Ok(self.inner.root_series().evaluate_c64(&sigma))
    }

    /// The truncated root series as text in the variables s1..sk.
    fn root_series_text(&self) -> String {
        self.inner.root_series().to_text()
    }

    /// Re-run the defining recurrences over the stored rectangle and report
    /// each violation as text. An empty list means the table is consistent.
    fn check_recurrences(&self) -> Vec<String> {
        self.inner
            .check_recurrences()
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CoeffTable(k={}, q_max={}, entries={})",
            self.inner.k(),
            self.inner.q_max(),
            self.inner.len()
        )
    }
}

/// Newton iteration on the shifted degree-k equation, started at -1.
#[pyfunction]
fn newton_root(k: usize, sigma: Vec<Complex64>) -> PyResult<Complex64> {
    require_k(k)?;
    let p = ShiftedPolynomial::new(k, sigma).map_err(oracle_err)?;
    p.newton_root().map_err(oracle_err)
}

/// Absolute difference between the truncated series and the Newton root.
#[pyfunction]
fn series_error(k: usize, q_max: u32, sigma: Vec<Complex64>) -> PyResult<f64> {
    require_k(k)?;
    require_sigma_len(k, &sigma)?;
    oracle::series_error(k, q_max, &sigma).map_err(oracle_err)
}

/// Run one verification suite and return its checks as dicts with keys
/// `name`, `passed` and `note`. Valid targets: identities, recurrences,
/// annihilation, determinant, surface, newton, all.
#[pyfunction]
#[pyo3(signature = (target, k, order = 6, max_m = 12))]
fn verify<'py>(
    py: Python<'py>,
    target: &str,
    k: usize,
    order: u32,
    max_m: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    require_k(k)?;
    let t: Target = target.parse().map_err(PyValueError::new_err)?;
    let mut out = Vec::new();
    for c in run_target(t, k, order, max_m) {
        let d = PyDict::new(py);
        d.set_item("name", c.name)?;
        d.set_item("passed", c.passed)?;
        d.set_item("note", c.note)?;
        out.push(d);
    }
    Ok(out)
}

/// The Newton power sum N_m as polynomial text in s1..sk.
#[pyfunction]
fn newton_text(k: usize, m: u32) -> PyResult<String> {
    require_k(k)?;
    Ok(weyl::newton_polynomial(k, m).to_text())
}

/// The divided Newton polynomial DN_m as text; m must be at least -(k-1).
#[pyfunction]
fn dn_text(k: usize, m: i64) -> PyResult<String> {
    require_k(k)?;
    if m < -(k as i64) + 1 {
        return Err(PyValueError::new_err(format!(
            "DN_{m} is undefined for k={k}; m must be at least {}",
            -(k as i64) + 1
        )));
    }
    Ok(weyl::dn_polynomial(k, m).to_text())
}

/// The discriminant of the generic degree-k polynomial as text in s1..sk.
#[pyfunction]
fn discriminant_text(k: usize) -> PyResult<String> {
    require_k(k)?;
    Ok(holoroot::detres::discriminant(k).to_text())
}

/// The minimal exponent vector of class (q, r) in k variables, or None when
/// the class is empty.
#[pyfunction]
fn minimal_form(k: usize, q: u32, r: u32) -> PyResult<Option<Vec<u32>>> {
    require_k(k)?;
    Ok(multiindex::minimal_form(k, QRKey::new(q, r)).map(|a| a.0))
}

/// Reduce an exponent vector to the minimal representative of its class.
#[pyfunction]
fn reduce_to_minimal(alpha: Vec<u32>) -> PyResult<Vec<u32>> {
    if alpha.is_empty() {
        return Err(PyValueError::new_err("alpha must be nonempty"));
    }
    Ok(multiindex::reduce_to_minimal(&MultiIndex(alpha)).0)
}

/// Every exponent vector in k variables with the given length and weight.
#[pyfunction]
fn enumerate_class(k: usize, q: u32, r: u32) -> PyResult<Vec<Vec<u32>>> {
    require_k(k)?;
    Ok(multiindex::enumerate_class(k, QRKey::new(q, r))
        .into_iter()
        .map(|a| a.0)
        .collect())
}

fn parse_chart(chart: &str) -> PyResult<Chart> {
    match chart {
        "1" => Ok(Chart::Chart1),
        "k" => Ok(Chart::ChartK),
        other => Err(PyValueError::new_err(format!(
            "unknown chart {other:?}; use \"1\" or \"k\""
        ))),
    }
}

/// The surface point eta_1..eta_k for chart parameters (zeta0, zeta1).
/// Charts are named "1" and "k".
#[pyfunction]
fn sk_point(k: usize, zeta0: Complex64, zeta1: Complex64, chart: &str) -> PyResult<Vec<Complex64>> {
    require_k(k)?;
    Ok(multiindex::sk_point(k, &zeta0, &zeta1, parse_chart(chart)?).eta)
}

/// All 2x2 minors eta_p eta_q - eta_{p+1} eta_{q-1} of a candidate point.
#[pyfunction]
fn sk_minors(eta: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    if eta.is_empty() {
        return Err(PyValueError::new_err("eta must be nonempty"));
    }
    Ok(multiindex::sk_minors(&SurfacePoint { eta }))
}

/// Floating membership test for the surface, with a size-scaled tolerance.
#[pyfunction]
fn on_surface(eta: Vec<Complex64>) -> PyResult<bool> {
    if eta.is_empty() {
        return Err(PyValueError::new_err("eta must be nonempty"));
    }
    Ok(multiindex::on_surface_f64(&SurfacePoint { eta }))
}

#[pymodule]
fn holoroot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCoeffTable>()?;
    m.add_function(wrap_pyfunction!(newton_root, m)?)?;
    m.add_function(wrap_pyfunction!(series_error, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(newton_text, m)?)?;
    m.add_function(wrap_pyfunction!(dn_text, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant_text, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_form, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_minimal, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_class, m)?)?;
    m.add_function(wrap_pyfunction!(sk_point, m)?)?;
    m.add_function(wrap_pyfunction!(sk_minors, m)?)?;
    m.add_function(wrap_pyfunction!(on_surface, m)?)?;
    Ok(())
}
