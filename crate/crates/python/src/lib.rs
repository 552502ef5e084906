//! Python module `paretail`.

use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use paretail::claims::{qq_data as qq_points, QqKind};
use paretail::spacings::log_spacings as spacings;
use paretail::{EstimatorResult, EstimatorTag, ParetoTypeDist, SecondOrderConfig, SecondOrderParams, SortedSample};

fn to_py(e: paretail::Error) -> PyErr {
    use paretail::Error as E;
    match e {
        E::SingularEstimate(_) | E::SingularFit(_) => PyArithmeticError::new_err(e.to_string()),
        E::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn sorted(values: Vec<f64>) -> PyResult<SortedSample> {
    SortedSample::new(values).map_err(to_py)
}

fn tag(name: &str) -> PyResult<EstimatorTag> {
    name.parse().map_err(to_py)
}

/// A Pareto-type distribution with known tail index.
#[pyclass(name = "Distribution", frozen, from_py_object)]
#[derive(Clone)]
struct PyDistribution(ParetoTypeDist);

#[pymethods]
impl PyDistribution {
    #[staticmethod]
    fn burr_xii(xi: f64, tau: f64) -> PyResult<Self> {
        ParetoTypeDist::burr_xii(xi, tau).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn frechet(alpha: f64) -> PyResult<Self> {
        ParetoTypeDist::frechet(alpha).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn strict_pareto(gamma: f64) -> PyResult<Self> {
        ParetoTypeDist::strict_pareto(gamma).map(Self).map_err(to_py)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.true_gamma()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.true_rho()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.true_beta()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.0.cdf(x)
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.0.quantile(p).map_err(to_py)
    }

    /// Sorted sample of size `n`.
    #[pyo3(signature = (n, seed=0))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64) -> PyResult<Vec<f64>> {
        let d = self.0;
        py.detach(|| d.sample(n, seed))
            .map(|s| s.values().to_vec())
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?})", self.0)
    }
}

/// Second-order parameters (rho, beta).
#[pyclass(name = "SecondOrder", frozen, from_py_object)]
#[derive(Clone)]
struct PySecondOrder(SecondOrderParams);

#[pymethods]
impl PySecondOrder {
    #[new]
    fn new(rho: f64, beta: f64) -> PyResult<Self> {
        if rho.is_nan() || rho >= 0.0 || !beta.is_finite() {
            return Err(PyValueError::new_err("need rho < 0 and finite beta"));
        }
        Ok(Self(SecondOrderParams::fixed(rho, beta)))
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho_hat
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta_hat
    }

    #[getter]
    fn k_range(&self) -> (usize, usize) {
        self.0.k_range
    }

    #[getter]
    fn k_beta(&self) -> usize {
        self.0.k_beta
    }

    #[getter]
    fn beta_fallback(&self) -> bool {
        self.0.beta_fallback
    }

    fn __repr__(&self) -> String {
        format!("SecondOrder(rho={}, beta={})", self.0.rho_hat, self.0.beta_hat)
    }
}

#[pyfunction]
fn hill(values: Vec<f64>, k: usize) -> PyResult<f64> {
    paretail::hill(&sorted(values)?, k).map_err(to_py)
}

#[pyfunction]
fn log_spacings(values: Vec<f64>, k: usize) -> PyResult<Vec<f64>> {
    spacings(&sorted(values)?, k).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (values, k_range=None, k_beta=None))]
fn second_order(
    py: Python<'_>,
    values: Vec<f64>,
    k_range: Option<(usize, usize)>,
    k_beta: Option<usize>,
) -> PyResult<PySecondOrder> {
    let s = sorted(values)?;
    let cfg = SecondOrderConfig {
        grid: None,
        k_range,
        k_beta,
    };
    py.detach(|| paretail::estimate_second_order(&s, &cfg))
        .map(PySecondOrder)
        .map_err(to_py)
}

fn resolve_so(
    py: Python<'_>,
    s: &SortedSample,
    t: EstimatorTag,
    so: Option<PySecondOrder>,
) -> PyResult<Option<SecondOrderParams>> {
    match (t, so) {
        (_, Some(so)) => Ok(Some(so.0)),
        (EstimatorTag::Hill, None) => Ok(None),
        (_, None) => py
            .detach(|| paretail::estimate_second_order(s, &SecondOrderConfig::default()))
            .map(Some)
            .map_err(to_py),
    }
}

fn result_dict<'py>(py: Python<'py>, r: &EstimatorResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("k", r.k)?;
    d.set_item("estimator", r.kind.tag().as_str())?;
    d.set_item("gamma_hat", r.gamma_hat)?;
    d.set_item("b_hat", r.b_hat)?;
    d.set_item("lambda", r.lambda_used)?;
    Ok(d)
}

/// One estimate; second-order parameters are estimated from the data when
/// not given.
#[pyfunction]
#[pyo3(signature = (values, k, estimator="rwls", second_order=None, seed=0))]
fn estimate<'py>(
    py: Python<'py>,
    values: Vec<f64>,
    k: usize,
    estimator: &str,
    second_order: Option<PySecondOrder>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = sorted(values)?;
    let t = tag(estimator)?;
    let so = resolve_so(py, &s, t, second_order)?;
    let r = py
        .detach(|| paretail::estimate(&s, k, &t.kind(), so.as_ref(), seed))
        .map_err(to_py)?;
    result_dict(py, &r)
}

/// Estimates for every k in `k_lo..=k_hi` as a list of dicts.
#[pyfunction]
#[pyo3(signature = (values, k_lo, k_hi, estimator="rwls", second_order=None, seed=0))]
fn tail_path<'py>(
    py: Python<'py>,
    values: Vec<f64>,
    k_lo: usize,
    k_hi: usize,
    estimator: &str,
    second_order: Option<PySecondOrder>,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s = sorted(values)?;
    let t = tag(estimator)?;
    let so = resolve_so(py, &s, t, second_order)?;
    let path = py
        .detach(|| paretail::tail_path(&s, &t.kind(), k_lo, k_hi, so.as_ref(), seed))
        .map_err(to_py)?;
    path.iter().map(|r| result_dict(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (values, kind="pareto"))]
fn qq_data(values: Vec<f64>, kind: &str) -> PyResult<Vec<(f64, f64)>> {
    let kind: QqKind = kind.parse().map_err(to_py)?;
    qq_points(&sorted(values)?, kind).map_err(to_py)
}

#[pymodule(name = "paretail")]
fn paretail_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistribution>()?;
    m.add_class::<PySecondOrder>()?;
    m.add_function(wrap_pyfunction!(hill, m)?)?;
    m.add_function(wrap_pyfunction!(log_spacings, m)?)?;
    m.add_function(wrap_pyfunction!(second_order, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(tail_path, m)?)?;
    m.add_function(wrap_pyfunction!(qq_data, m)?)?;
    m.add(
        "ESTIMATORS",
        EstimatorTag::ALL.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
    )?;
    Ok(())
}
