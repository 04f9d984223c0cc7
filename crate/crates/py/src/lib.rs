//! Python bindings. Matrices cross the boundary as nested lists of `complex`.

use esdsim::analysis::{self, Mode, Probe, SweepGrid, DEFAULT_ROOT_TOL, DEFAULT_STEP};
use esdsim::channels::{self, NoiseKind, Param};
use esdsim::closedform::{self, CollectiveVariant};
use esdsim::entanglement;
use esdsim::linalg::{Matrix, DEFAULT_TOL};
use esdsim::{states, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } | Error::Io(_) | Error::Json(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn to_rows(m: &Matrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<Matrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Matrix::new(n, cols, rows.into_iter().flatten().collect()).map_err(to_py)
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A noise configuration: kind plus the parameters it uses.
#[pyclass(frozen, skip_from_py_object, name = "NoiseScenario", module = "esdsim")]
#[derive(Clone, Copy)]
struct PyNoiseScenario(channels::NoiseScenario);

#[pymethods]
impl PyNoiseScenario {
    #[new]
    #[pyo3(signature = (kind, p1 = 0.0, p2 = 0.0, p = 0.0))]
    fn new(kind: &str, p1: f64, p2: f64, p: f64) -> PyResult<Self> {
        let kind: NoiseKind = parse(kind)?;
        channels::NoiseScenario::new(kind, p1, p2, p).map(Self).map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().name()
    }

    #[getter]
    fn p1(&self) -> f64 {
        self.0.p1()
    }

    #[getter]
    fn p2(&self) -> f64 {
        self.0.p2()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p()
    }

    fn __repr__(&self) -> String {
        format!(
            "NoiseScenario('{}', p1={}, p2={}, p={})",
            self.0.kind(),
            self.0.p1(),
            self.0.p2(),
            self.0.p()
        )
    }
}

fn probe(
    scenario: &PyNoiseScenario,
    mode: &str,
    swept: Option<&str>,
    variant: &str,
) -> PyResult<Probe> {
    let mode: Mode = parse(mode)?;
    let swept: Param = match swept {
        Some(s) => parse(s)?,
        None => analysis::default_swept(scenario.0.kind()),
    };
    Ok(Probe::new(scenario.0, swept, mode)
        .map_err(to_py)?
        .with_variant(parse::<CollectiveVariant>(variant)?))
}

/// Density matrix of the initial family at `x` in `[0, 1/4]`.
#[pyfunction]
fn rho_x(x: f64) -> PyResult<Vec<Vec<Complex64>>> {
    states::rho_x(x).map(|m| to_rows(&m)).map_err(to_py)
}

/// Applies the scenario's channels to a 6x6 density matrix.
#[pyfunction]
fn evolve(scenario: &PyNoiseScenario, rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = from_rows(rho)?;
    channels::evolve(&scenario.0, &rho).map(|m| to_rows(&m)).map_err(to_py)
}

/// Ascending eigenvalues of a Hermitian matrix.
#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_TOL))]
fn eigvalsh(a: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Vec<f64>> {
    let a = from_rows(a)?;
    esdsim::linalg::hermitian_spectrum(&a, tol)
        .map(|s| s.eigenvalues)
        .map_err(to_py)
}

/// Qubit partial transpose of a 6x6 matrix.
#[pyfunction]
fn partial_transpose(rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = from_rows(rho)?;
    entanglement::partial_transpose_qubit(&rho)
        .map(|m| to_rows(&m))
        .map_err(to_py)
}

/// Standard negativity: sum of |negative eigenvalues| of the partial transpose.
#[pyfunction]
#[pyo3(signature = (rho, tol = DEFAULT_TOL))]
fn negativity(rho: Vec<Vec<Complex64>>, tol: f64) -> PyResult<f64> {
    let rho = from_rows(rho)?;
    entanglement::negativity_standard(&rho, tol)
        .map(|n| n.negativity)
        .map_err(to_py)
}

/// Numerically evolved negativity of `rho(x)`.
#[pyfunction]
#[pyo3(signature = (scenario, x, tol = DEFAULT_TOL))]
fn numeric_negativity(scenario: &PyNoiseScenario, x: f64, tol: f64) -> PyResult<f64> {
    analysis::numeric_negativity(&scenario.0, x, tol)
        .map(|n| n.negativity)
        .map_err(to_py)
}

/// Closed-form negativity of `rho(x)` for the scenario.
#[pyfunction]
#[pyo3(signature = (scenario, x, variant = "reconstructed"))]
fn paper_negativity(scenario: &PyNoiseScenario, x: f64, variant: &str) -> PyResult<f64> {
    closedform::negativity_paper(&scenario.0, x, parse(variant)?)
        .map(|n| n.value)
        .map_err(to_py)
}

/// Negativity records over a parameter grid, as a list of dicts.
#[pyfunction]
#[pyo3(signature = (scenario, x_values, step = DEFAULT_STEP, mode = "standard", swept = None, variant = "reconstructed"))]
fn sweep<'py>(
    py: Python<'py>,
    scenario: &PyNoiseScenario,
    x_values: Vec<f64>,
    step: f64,
    mode: &str,
    swept: Option<&str>,
    variant: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let pr = probe(scenario, mode, swept, variant)?;
    let mut grid = SweepGrid::new(pr.scenario, pr.swept, pr.mode);
    grid.param_values = analysis::param_grid(step).map_err(to_py)?;
    grid.x_values = x_values;
    grid.variant = pr.variant;
    let records = py.detach(|| analysis::sweep(&grid)).map_err(to_py)?;
    json_to_py(py, &records)
}

/// Parameter values where the negativity is equal at `xa` and `xb`.
#[pyfunction]
#[pyo3(signature = (scenario, xa = 0.0, xb = 0.25, mode = "paper", swept = None, variant = "reconstructed", tol = DEFAULT_ROOT_TOL))]
fn critical_point(
    scenario: &PyNoiseScenario,
    xa: f64,
    xb: f64,
    mode: &str,
    swept: Option<&str>,
    variant: &str,
    tol: f64,
) -> PyResult<Vec<f64>> {
    let pr = probe(scenario, mode, swept, variant)?;
    analysis::critical_point(&pr, xa, xb, tol).map_err(to_py)
}

/// First parameter value with zero negativity, as `(value, kind)`, or `None`.
#[pyfunction]
#[pyo3(signature = (scenario, x, mode = "standard", swept = None, variant = "reconstructed", tol = DEFAULT_ROOT_TOL))]
fn esd_onset(
    scenario: &PyNoiseScenario,
    x: f64,
    mode: &str,
    swept: Option<&str>,
    variant: &str,
    tol: f64,
) -> PyResult<Option<(f64, &'static str)>> {
    let pr = probe(scenario, mode, swept, variant)?;
    analysis::esd_onset(&pr, x, tol)
        .map(|o| o.map(|o| (o.param, o.kind.name())))
        .map_err(to_py)
}

/// Closed-form versus numeric comparison, as a dict.
#[pyfunction]
#[pyo3(signature = (density = 11))]
fn discrepancy_report(py: Python<'_>, density: usize) -> PyResult<Bound<'_, PyAny>> {
    let report = py.detach(|| analysis::discrepancy_report(density)).map_err(to_py)?;
    json_to_py(py, &report)
}

/// Hard invariant checks as a list of dicts with `name`, `passed`, `detail`.
#[pyfunction]
fn verify(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let checks = py.detach(analysis::verify_invariants).map_err(to_py)?;
    json_to_py(py, &checks)
}

#[pymodule]
#[pyo3(name = "esdsim")]
fn esdsim_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNoiseScenario>()?;
    m.add_function(wrap_pyfunction!(rho_x, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(eigvalsh, m)?)?;
    m.add_function(wrap_pyfunction!(partial_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(negativity, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(paper_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(critical_point, m)?)?;
    m.add_function(wrap_pyfunction!(esd_onset, m)?)?;
    m.add_function(wrap_pyfunction!(discrepancy_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("PPT_BOUNDARY", states::PPT_BOUNDARY)?;
    Ok(())
}
