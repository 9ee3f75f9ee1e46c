//! Python bindings. Every error from the core surfaces as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use lagmult::experiments::{self, Experiment, ExperimentConfig};
use lagmult::hardy::{hardy_a, hardy_b, HardyInstance};
use lagmult::multiplier::{mpinfty_norm, mpq_lower_bound, r_grid, weighted_m2_norm, PowerOptions};
use lagmult::norms::SpaceParams;
use lagmult::quadrature::QuadratureRule;
use lagmult::sequences::{frac_diff_auto, wbv_norm, DEFAULT_TAIL_TOL};
use lagmult::special::Order;

fn err(e: lagmult::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn order(alpha: f64) -> PyResult<Order> {
    Order::new(alpha).map_err(err)
}

/// A multiplier sequence parsed from a `family:params` string such as `abel:0.9` or `riesz:128:1.5`.
#[pyclass(name = "MultiplierSeq", frozen)]
struct PyMultiplierSeq(lagmult::sequences::MultiplierSeq);

#[pymethods]
impl PyMultiplierSeq {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        lagmult::sequences::MultiplierSeq::parse(spec).map(Self).map_err(err)
    }

    #[getter]
    fn spec(&self) -> String {
        self.0.spec().to_string()
    }

    fn value(&self, k: usize) -> f64 {
        self.0.value(k)
    }

    /// `m_0, ..., m_{n-1}`
    fn values(&self, n: usize) -> Vec<f64> {
        self.0.values(n)
    }

    fn sup_abs(&self) -> f64 {
        self.0.sup_abs()
    }

    /// `Δ^δ m_k` with the default tail tolerance.
    fn frac_diff(&self, delta: f64, k: usize) -> PyResult<f64> {
        frac_diff_auto(&self.0, delta, k, DEFAULT_TAIL_TOL).map(|d| d.value).map_err(err)
    }

    /// `‖m‖_{wbv_{q,δ}}` over dyadic blocks up to `n_max`.
    #[pyo3(signature = (q, delta, n_max = 4096))]
    fn wbv_norm(&self, q: f64, delta: f64, n_max: usize) -> PyResult<f64> {
        wbv_norm(&self.0, q, delta, n_max).map(|r| r.norm).map_err(err)
    }

    /// Largest singular value of the degree-`< n` section on `L²_{w(α+λ)}`.
    #[pyo3(signature = (alpha, lam, n = 128))]
    fn weighted_m2_norm(&self, alpha: f64, lam: f64, n: usize) -> PyResult<f64> {
        weighted_m2_norm(&self.0, order(alpha)?, lam, n, &PowerOptions::default()).map(|r| r.value).map_err(err)
    }

    /// `max_r ‖P_r(m)‖_{L^p_{w(α)}}` over the default r-grid subdivided `density` times.
    #[pyo3(signature = (p, alpha, density = 1))]
    fn mpinfty_norm(&self, p: f64, alpha: f64, density: usize) -> PyResult<f64> {
        mpinfty_norm(&self.0, p, order(alpha)?, &r_grid(density)).map(|r| r.value).map_err(err)
    }

    /// Search lower bound for the norm from `L^p_{w(γ)}` to `L^q_{w(δ)}`.
    #[pyo3(signature = (p, gamma, q, delta, alpha, trials = 32, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn mpq_lower_bound(&self, p: f64, gamma: f64, q: f64, delta: f64, alpha: f64, trials: usize, seed: u64) -> PyResult<f64> {
        let from = SpaceParams::new(p, gamma).map_err(err)?;
        let to = SpaceParams::new(q, delta).map_err(err)?;
        mpq_lower_bound(&self.0, from, to, order(alpha)?, trials, seed).map(|r| r.value).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("MultiplierSeq('{}')", self.0.spec())
    }
}

/// Coefficients `ĥ_α(k)` of a finite Laguerre expansion.
#[pyclass(name = "LaguerreExpansion", frozen)]
struct PyExpansion(lagmult::spectral::LaguerreExpansion);

#[pymethods]
impl PyExpansion {
    #[new]
    fn new(alpha: f64, coeffs: Vec<f64>) -> PyResult<Self> {
        lagmult::spectral::LaguerreExpansion::new(order(alpha)?, coeffs).map(Self).map_err(err)
    }

    /// Expansion of the polynomial `Σ c_j x^j` through degree `n`.
    #[staticmethod]
    fn from_polynomial(alpha: f64, monomial_coeffs: Vec<f64>, n: usize) -> PyResult<Self> {
        let o = order(alpha)?;
        let f = lagmult::spectral::Polynomial::new(monomial_coeffs);
        let rule = QuadratureRule::new(o, n.max(f.degree()) + 8).map_err(err)?;
        lagmult::spectral::analyze(&f, o, n, &rule).map(Self).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.order().get()
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.0.synthesize(x).map_err(err)
    }

    /// `Γ(α+1)^{-1} Σ A_k^α |ĥ(k)|²`, the squared `L²_{w(α)}` norm.
    fn parseval_sum(&self) -> f64 {
        self.0.parseval_sum()
    }

    /// `T_m` applied coefficientwise.
    fn apply(&self, m: &PyMultiplierSeq) -> Self {
        Self(lagmult::multiplier::apply_multiplier(&m.0, &self.0))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// `L_n^α(x)`
#[pyfunction]
fn laguerre(n: usize, alpha: f64, x: f64) -> PyResult<f64> {
    lagmult::laguerre::laguerre(n, alpha, x).map_err(err)
}

/// Nodes and weights of the `n`-point Gauss rule for `x^α e^{-x}`.
#[pyfunction]
fn gauss_laguerre(alpha: f64, n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let r = QuadratureRule::new(order(alpha)?, n).map_err(err)?;
    Ok((r.nodes().to_vec(), r.weights().to_vec()))
}

/// Both Hardy forms for weights `u, v` and data `a`: `{"A": (lhs, B, rhs), "B": (...)}`.
#[pyfunction]
fn hardy(u: Vec<f64>, v: Vec<f64>, a: Vec<f64>) -> PyResult<std::collections::BTreeMap<&'static str, (f64, f64, f64)>> {
    let inst = HardyInstance::new(u, v, a).map_err(err)?;
    let (sa, sb) = (hardy_a(&inst), hardy_b(&inst));
    Ok([("A", (sa.lhs, sa.b, sa.rhs_weighted)), ("B", (sb.lhs, sb.b, sb.rhs_weighted))].into_iter().collect())
}

/// Runs an experiment by CLI name with `key = value` configuration text.
/// Returns `(csv, summary_json, passed)`.
#[pyfunction]
#[pyo3(signature = (name, config = ""))]
fn run_experiment(py: Python<'_>, name: &str, config: &str) -> PyResult<(String, String, bool)> {
    let exp: Experiment = name.parse().map_err(err)?;
    let cfg = ExperimentConfig::parse(config, Some(exp)).map_err(err)?;
    let outcome = py.detach(|| experiments::run(&cfg)).map_err(err)?;
    Ok((outcome.csv(), outcome.json(), outcome.passed()))
}

#[pymodule]
fn lagmult_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultiplierSeq>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(hardy, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("SCHEMA_VERSION", experiments::SCHEMA_VERSION)?;
    Ok(())
}
