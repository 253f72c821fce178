//! Python bindings: `import transport_moments`.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use transport_moments::algebra::Rational;
use transport_moments::basegen::{self, BaseStructure};
use transport_moments::diagrams::{self, TargetPerm, UntieMode};
use transport_moments::perm::{self, Carrier, Label};
use transport_moments::summation::{self, closed_forms::FormulaId};
use transport_moments::verify::{run_verify, VerifyOptions};
use transport_moments::{rmt_oracle, Quantity, Symmetry};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn symmetry(s: &str) -> PyResult<Symmetry> {
    s.parse().map_err(value_err)
}

fn quantity(s: &str) -> PyResult<Quantity> {
    s.parse().map_err(value_err)
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((format!("{}/{}", r.numer(), r.denom()),))
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

/// Permutation on the barred (`{1..n, n̄..1̄}`) or reduced (`{1..n}`)
/// alphabet. Barred labels are negative integers.
#[pyclass(name = "Perm", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPerm(perm::Perm);

#[pymethods]
impl PyPerm {
    #[staticmethod]
    #[pyo3(signature = (n, text, barred = true))]
    fn parse(n: u32, text: &str, barred: bool) -> PyResult<Self> {
        let carrier = if barred { Carrier::Barred } else { Carrier::Reduced };
        perm::Perm::parse(n, carrier, text).map(PyPerm).map_err(value_err)
    }

    #[getter]
    fn points(&self) -> u32 {
        self.0.points()
    }

    fn compose(&self, other: &PyPerm) -> PyResult<PyPerm> {
        perm::compose(&self.0, &other.0).map(PyPerm).map_err(value_err)
    }

    fn inverse(&self) -> PyPerm {
        PyPerm(self.0.inverse())
    }

    fn reversal(&self) -> PyResult<PyPerm> {
        self.0.reversal().map(PyPerm).map_err(value_err)
    }

    fn is_palindromic(&self) -> bool {
        self.0.is_palindromic()
    }

    fn cycles(&self) -> Vec<Vec<i64>> {
        self.0.label_cycles().iter().map(|c| c.iter().map(|l| l.signed()).collect()).collect()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type()
    }

    fn __str__(&self) -> String {
        self.0.to_human_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm({})", self.0.to_machine_string())
    }
}

#[pyclass(name = "BaseStructure", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBaseStructure(BaseStructure);

#[pymethods]
impl PyBaseStructure {
    #[staticmethod]
    fn parse(m: u32, line: &str) -> PyResult<Self> {
        BaseStructure::parse_line(m, line).map(PyBaseStructure).map_err(value_err)
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.m
    }

    #[getter]
    fn genus2(&self) -> u32 {
        self.0.genus2
    }

    #[getter]
    fn orientable(&self) -> bool {
        self.0.orientable
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    #[getter]
    fn epsilon(&self) -> PyPerm {
        PyPerm(self.0.epsilon.clone())
    }

    #[getter]
    fn nu(&self) -> PyPerm {
        PyPerm(self.0.nu.clone())
    }

    fn vertex_degrees(&self) -> Vec<usize> {
        self.0.vertices.iter().map(|v| v.degree).collect()
    }

    fn to_line(&self) -> String {
        self.0.to_line()
    }

    fn __repr__(&self) -> String {
        format!("BaseStructure(m={}, {:?})", self.0.m, self.0.to_line())
    }
}

/// Structures of one `2g`, optionally only those with `m` edges.
#[pyfunction]
#[pyo3(signature = (genus2, symmetry, m = None, cache_dir = None))]
fn enumerate(py: Python<'_>, genus2: u32, symmetry: &str, m: Option<u32>, cache_dir: Option<PathBuf>) -> PyResult<Vec<PyBaseStructure>> {
    let sym = self::symmetry(symmetry)?;
    let cat = py.detach(|| basegen::catalogue(genus2, sym, cache_dir.as_deref())).map_err(runtime_err)?;
    Ok(cat
        .into_iter()
        .filter(|(k, _)| m.is_none_or(|m| m == *k))
        .flat_map(|(_, l)| l.into_iter().map(PyBaseStructure))
        .collect())
}

/// `{m: count}` for one `2g`.
#[pyfunction]
fn count(py: Python<'_>, genus2: u32, symmetry: &str) -> PyResult<std::collections::BTreeMap<u32, usize>> {
    let sym = self::symmetry(symmetry)?;
    Ok(py.detach(|| basegen::count_by_genus(genus2, sym)))
}

/// Generating-function coefficient as the JSON document of the CLI.
#[pyfunction]
#[pyo3(signature = (quantity, symmetry, genus2, truncation = 10, cache_dir = None))]
fn moments<'py>(
    py: Python<'py>,
    quantity: &str,
    symmetry: &str,
    genus2: u32,
    truncation: usize,
    cache_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let (q, sym) = (self::quantity(quantity)?, self::symmetry(symmetry)?);
    let res = py.detach(|| summation::assemble(genus2, sym, q, truncation, cache_dir.as_deref())).map_err(runtime_err)?;
    json_to_py(py, &res.to_json())
}

/// Coefficients of a catalogued closed form (`"T4O"`, `"R2U"`, ...), in
/// powers of `ζ₁`: entry `n` is the list of coefficients of `ζ₁^j` in `[sⁿ]`.
#[pyfunction]
#[pyo3(signature = (formula, truncation = 10))]
fn closed_form<'py>(py: Python<'py>, formula: &str, truncation: usize) -> PyResult<Bound<'py, PyAny>> {
    let id: FormulaId = formula.parse().map_err(value_err)?;
    let s = summation::closed_form_series(id, truncation).map_err(runtime_err)?;
    json_to_py(py, &s.to_json_zeta1())
}

/// Untie a target permutation with a key given as signed labels. `mode` is
/// `"orthogonal"`, `"i"` or `"o"`; the target is barred for orthogonal.
#[pyfunction]
fn untie(n: u32, target: &str, key: Vec<i64>, mode: &str) -> PyResult<PyPerm> {
    let mode = match mode {
        "orthogonal" => UntieMode::Orthogonal,
        "i" => UntieMode::UnitaryI,
        "o" => UntieMode::UnitaryO,
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    };
    let t = if mode == UntieMode::Orthogonal { TargetPerm::parse_orthogonal(n, target) } else { TargetPerm::parse_reduced(n, target) }
        .map_err(value_err)?;
    let key: Vec<Label> = key.into_iter().map(Label::from_signed).collect::<Result<_, _>>().map_err(value_err)?;
    diagrams::untie(&t, &key, mode).map(|t| PyPerm(t.perm)).map_err(value_err)
}

/// `{cycle type: Fraction}` at integer `N`.
#[pyfunction]
fn weingarten<'py>(py: Python<'py>, n: usize, big_n: i64) -> PyResult<Bound<'py, PyDict>> {
    let w = rmt_oracle::weingarten(n, big_n).map_err(value_err)?;
    let out = PyDict::new(py);
    for (k, v) in &w.values {
        out.set_item(pyo3::types::PyTuple::new(py, k)?, fraction(py, v)?)?;
    }
    Ok(out)
}

/// Exact CUE moment `⟨Tr (t†t)ⁿ⟩` or `⟨Tr (r†r)ⁿ⟩` as a Fraction.
#[pyfunction]
fn cue_moment<'py>(py: Python<'py>, n: usize, n1: i64, n2: i64, quantity: &str) -> PyResult<Bound<'py, PyAny>> {
    let m = rmt_oracle::cue_moment(n, n1, n2, self::quantity(quantity)?).map_err(value_err)?;
    fraction(py, &m)
}

/// Runs the verification catalogue; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (genus2 = 2, truncation = 10))]
fn verify<'py>(py: Python<'py>, genus2: u32, truncation: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = VerifyOptions { max_genus2: genus2, truncation, cache: None };
    let report = py.detach(|| run_verify(&opts, &mut |_| {}));
    json_to_py(py, &report.to_json())
}

#[pymodule]
#[pyo3(name = "transport_moments")]
fn transport_moments_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyBaseStructure>()?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(untie, m)?)?;
    m.add_function(wrap_pyfunction!(weingarten, m)?)?;
    m.add_function(wrap_pyfunction!(cue_moment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
