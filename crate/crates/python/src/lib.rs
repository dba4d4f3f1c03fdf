//! Python bindings: generate and load realizations, classify their distance
//! matrices, certify corank bounds and run family sweeps.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use pennycdv::cdv::DirectSap;
use pennycdv::edm::{classify, edm_from_points};
use pennycdv::penny::{
    generate_realization, harborth_bound as harborth, perturb, read_realization,
    realization_from_json, realization_to_json, write_realization,
};
use pennycdv::{Error, Family, TheoremReport, VerifyOptions};

create_exception!(pennycdv_py, PennyError, PyException);
create_exception!(pennycdv_py, InputError, PennyError);

fn to_py(e: Error) -> PyErr {
    let msg = format!("[{}] {e}", e.kind());
    if e.is_input_error() {
        InputError::new_err(msg)
    } else {
        PennyError::new_err(msg)
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PennyError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_family(name: &str) -> PyResult<Family> {
    name.parse::<Family>().map_err(to_py)
}

/// Tolerances used by every numerical decision.
#[pyclass(
    module = "pennycdv_py",
    name = "TolerancePolicy",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyPolicy {
    inner: pennycdv::TolerancePolicy,
}

#[pymethods]
impl PyPolicy {
    #[new]
    #[pyo3(signature = (rel_zero=1e-12, min_gap_ratio=1e3, contact=1e-9))]
    fn new(rel_zero: f64, min_gap_ratio: f64, contact: f64) -> PyResult<Self> {
        let inner =
            pennycdv::TolerancePolicy::new(rel_zero, min_gap_ratio, contact).map_err(to_py)?;
        Ok(PyPolicy { inner })
    }

    #[getter]
    fn rel_zero(&self) -> f64 {
        self.inner.rel_zero
    }

    #[getter]
    fn min_gap_ratio(&self) -> f64 {
        self.inner.min_gap_ratio
    }

    #[getter]
    fn contact(&self) -> f64 {
        self.inner.contact
    }

    fn __repr__(&self) -> String {
        format!(
            "TolerancePolicy(rel_zero={:e}, min_gap_ratio={:e}, contact={:e})",
            self.inner.rel_zero, self.inner.min_gap_ratio, self.inner.contact
        )
    }
}

fn policy_of(policy: Option<&PyPolicy>) -> pennycdv::TolerancePolicy {
    policy.map(|p| p.inner).unwrap_or_default()
}

/// Disk centers in units of the disk diameter.
#[pyclass(
    module = "pennycdv_py",
    name = "Realization",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyRealization {
    inner: pennycdv::Realization,
}

#[pymethods]
impl PyRealization {
    #[new]
    #[pyo3(signature = (points, name="realization"))]
    fn new(points: Vec<[f64; 2]>, name: &str) -> Self {
        PyRealization {
            inner: pennycdv::Realization::new(name, points),
        }
    }

    /// Member `n` of a named family (path, collinear, union, cycle, flower, strip).
    #[staticmethod]
    fn generate(family: &str, n: usize) -> PyResult<Self> {
        let inner = generate_realization(parse_family(family)?, n).map_err(to_py)?;
        Ok(PyRealization { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyRealization {
            inner: read_realization(path).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRealization {
            inner: realization_from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        realization_to_json(&self.inner).map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        write_realization(&self.inner, path).map_err(to_py)
    }

    /// Seeded jitter followed by a rescale to minimum distance 1.
    #[pyo3(signature = (amplitude, seed=0))]
    fn perturbed(&self, amplitude: f64, seed: u64) -> PyResult<Self> {
        Ok(PyRealization {
            inner: perturb(&self.inner, amplitude, seed).map_err(to_py)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.points.iter().map(|p| (p[0], p[1])).collect()
    }

    #[getter]
    fn has_exact(&self) -> bool {
        self.inner.exact.is_some()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Realization(name={:?}, n={})",
            self.inner.name,
            self.inner.len()
        )
    }
}

/// Outcome of certifying one realization.
#[pyclass(module = "pennycdv_py", name = "Certificate", frozen)]
struct PyCertificate {
    report: TheoremReport,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn passed(&self) -> bool {
        self.report.passed
    }

    #[getter]
    fn n(&self) -> usize {
        self.report.n
    }

    #[getter]
    fn corank(&self) -> usize {
        self.report.certificate.corank
    }

    #[getter]
    fn expected_corank(&self) -> usize {
        self.report.expected_corank
    }

    #[getter]
    fn mu_lower_bound(&self) -> Option<usize> {
        self.report.certificate.mu_lower_bound
    }

    #[getter]
    fn conditions(&self) -> (bool, bool, bool) {
        let c = &self.report.certificate;
        (c.m1_ok, c.m2_ok, c.m3_ok)
    }

    #[getter]
    fn reduced(&self) -> bool {
        self.report.certificate.reduced
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.report.full_classification.kind.label()
    }

    /// Exact `rank(D)` of the full realization, when computed.
    #[getter(rank_d_exact)]
    fn full_rank_d_exact(&self) -> Option<usize> {
        self.report.full_rank_d_exact
    }

    #[getter]
    fn gap_ratio(&self) -> f64 {
        self.report.certificate.eigen.gap_ratio
    }

    #[getter]
    fn failures(&self) -> Vec<String> {
        self.report.failures.clone()
    }

    /// The candidate matrix `M` as a list of rows.
    fn matrix(&self) -> Vec<Vec<f64>> {
        self.report.certificate.m.rows()
    }

    fn to_json(&self) -> PyResult<String> {
        self.report.to_json().map_err(to_py)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.report)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(n={}, corank={}, passed={})",
            self.report.n,
            self.report.certificate.corank,
            if self.report.passed { "True" } else { "False" }
        )
    }
}

/// Certifies the corank bound for the complement of the contact graph.
#[pyfunction]
#[pyo3(signature = (realization, exact=false, direct_sap="auto", policy=None))]
fn verify(
    py: Python<'_>,
    realization: &PyRealization,
    exact: bool,
    direct_sap: &str,
    policy: Option<&PyPolicy>,
) -> PyResult<PyCertificate> {
    let direct_sap = match direct_sap {
        "auto" => DirectSap::Auto,
        "always" => DirectSap::Always,
        "never" => DirectSap::Never,
        other => {
            return Err(InputError::new_err(format!(
                "direct_sap must be auto, always or never, got {other:?}"
            )))
        }
    };
    let opts = VerifyOptions { exact, direct_sap };
    let policy = policy_of(policy);
    let r = &realization.inner;
    let report = py
        .detach(|| pennycdv::verify_theorem(r, &policy, opts))
        .map_err(to_py)?;
    Ok(PyCertificate { report })
}

/// Spherical or nonspherical verdict for the realization's distance matrix.
#[pyfunction]
#[pyo3(signature = (realization, policy=None))]
fn classify_edm<'py>(
    py: Python<'py>,
    realization: &PyRealization,
    policy: Option<&PyPolicy>,
) -> PyResult<Bound<'py, PyAny>> {
    let cls = classify(&edm_from_points(&realization.inner), &policy_of(policy)).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("kind", cls.kind.label())?;
    out.set_item("embedding_dim", cls.embedding_dim)?;
    out.set_item("rank_d", cls.rank_d)?;
    out.set_item("e_dot_w", cls.e_dot_w)?;
    out.set_item("radius_sq", cls.radius_sq())?;
    out.set_item("spherical_by_rank", cls.spherical_by_rank)?;
    out.set_item("spherical_by_e_dot_w", cls.spherical_by_e_dot_w)?;
    out.set_item("gap_ratio", cls.rank_decision.gap_ratio)?;
    Ok(out.into_any())
}

/// Contact graph facts and spectral side checks as a dict.
#[pyfunction]
#[pyo3(signature = (realization, policy=None))]
fn edm_info<'py>(
    py: Python<'py>,
    realization: &PyRealization,
    policy: Option<&PyPolicy>,
) -> PyResult<Bound<'py, PyAny>> {
    let info = pennycdv::edm_info(&realization.inner, &policy_of(policy)).map_err(to_py)?;
    to_dict(py, &info)
}

/// Largest edge count of a penny graph on `n` nodes.
#[pyfunction]
fn harborth_bound(n: usize) -> PyResult<usize> {
    if n == 0 {
        return Err(InputError::new_err("n must be at least 1"));
    }
    Ok(harborth(n))
}

#[pyfunction]
fn families() -> Vec<&'static str> {
    Family::ALL.iter().map(|f| f.name()).collect()
}

fn sweep_rows(
    py: Python<'_>,
    families: Vec<String>,
    n_min: usize,
    n_max: usize,
    exact: bool,
    policy: Option<&PyPolicy>,
) -> PyResult<Vec<pennycdv::SweepRow>> {
    let families = families
        .iter()
        .map(|f| parse_family(f))
        .collect::<PyResult<Vec<_>>>()?;
    let policy = policy_of(policy);
    let opts = VerifyOptions {
        exact,
        ..Default::default()
    };
    py.detach(|| pennycdv::run_sweep(&families, n_min, n_max, &policy, opts))
        .map_err(to_py)
}

/// Certifies every family member in `n_min..=n_max`; returns a list of row dicts.
#[pyfunction]
#[pyo3(signature = (families, n_min=5, n_max=40, exact=false, policy=None))]
fn sweep<'py>(
    py: Python<'py>,
    families: Vec<String>,
    n_min: usize,
    n_max: usize,
    exact: bool,
    policy: Option<&PyPolicy>,
) -> PyResult<Bound<'py, PyAny>> {
    let rows = sweep_rows(py, families, n_min, n_max, exact, policy)?;
    to_dict(py, &rows)
}

/// Same as `sweep` but rendered as CSV text.
#[pyfunction]
#[pyo3(signature = (families, n_min=5, n_max=40, exact=false, timings=false, policy=None))]
fn sweep_csv(
    py: Python<'_>,
    families: Vec<String>,
    n_min: usize,
    n_max: usize,
    exact: bool,
    timings: bool,
    policy: Option<&PyPolicy>,
) -> PyResult<String> {
    let rows = sweep_rows(py, families, n_min, n_max, exact, policy)?;
    Ok(pennycdv::sweep_csv(&rows, timings))
}

#[pymodule]
fn pennycdv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolicy>()?;
    m.add_class::<PyRealization>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_edm, m)?)?;
    m.add_function(wrap_pyfunction!(edm_info, m)?)?;
    m.add_function(wrap_pyfunction!(harborth_bound, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add("PennyError", m.py().get_type::<PennyError>())?;
    m.add("InputError", m.py().get_type::<InputError>())?;
    Ok(())
}
