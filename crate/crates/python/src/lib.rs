//! Python bindings for `smallball-core`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use smallball_core::asymptotics::{self as asy, SmallBallLaw};
use smallball_core::catalog::{self, Family, ProcessParams, ProcessSpec};
use smallball_core::constants::{self, DEFAULT_TAIL_ORDER};
use smallball_core::oracle::{self, CompletedSpectrum, DEFAULT_TAIL_LENGTH};
use smallball_core::spectral;
use smallball_core::verify::{self, Suite, VerifyConfig, ORACLE_ROOTS};
use smallball_core::Error;

create_exception!(smallball, NumericalError, PyException, "A numerical guard was triggered.");

fn err(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// A catalog process and its boundary value problem.
#[pyclass(name = "Process", frozen)]
struct PyProcess {
    spec: ProcessSpec,
}

#[pymethods]
impl PyProcess {
    #[new]
    #[pyo3(signature = (family, c=None, l=None, m=None, beta=None))]
    fn new(family: &str, c: Option<f64>, l: Option<usize>, m: Option<usize>, beta: Option<&str>) -> PyResult<Self> {
        let f: Family = family.parse().map_err(err)?;
        let beta = match beta {
            Some(b) => Some(catalog::parse_beta(b).map_err(err)?),
            None => m.map(|m| vec![0; m]),
        };
        let m = m.or(beta.as_ref().map(Vec::len));
        let spec = catalog::catalog_process(f, &ProcessParams { c, l, m, beta }).map_err(err)?;
        Ok(PyProcess { spec })
    }

    #[getter]
    fn label(&self) -> String {
        self.spec.label()
    }
    #[getter]
    fn family(&self) -> &'static str {
        self.spec.family.id()
    }
    #[getter]
    fn ell(&self) -> usize {
        self.spec.ell
    }
    #[getter]
    fn kappa(&self) -> usize {
        self.spec.kappa
    }
    #[getter]
    fn theta_ell(&self) -> f64 {
        self.spec.theta_ell
    }
    #[getter]
    fn zero_mode(&self) -> bool {
        self.spec.zero_mode
    }

    /// `(ρ′, ρ″)` of the θ-quadratic.
    fn phases(&self) -> PyResult<(f64, f64)> {
        let q = smallball_core::bvp_algebra::theta_coefficients(&self.spec.bvp).map_err(err)?;
        let p = smallball_core::bvp_algebra::rho_pair(&q);
        Ok((p.rho_prime, p.rho_second))
    }

    fn rho_sum_residual(&self) -> PyResult<f64> {
        smallball_core::bvp_algebra::verify_rho_sum(&self.spec.bvp).map_err(err)
    }

    /// First `count` eigenvalues `λ_n` of the covariance operator.
    fn eigenvalues(&self, count: usize) -> PyResult<Vec<f64>> {
        Ok(spectral::spectrum(&self.spec, count).map_err(err)?.lambda())
    }

    /// Characteristic roots `r_n`, repeated by multiplicity.
    fn roots(&self, count: usize) -> PyResult<Vec<f64>> {
        Ok(spectral::spectrum(&self.spec, count).map_err(err)?.r())
    }

    #[pyo3(signature = (count=10, grid=spectral::DEFAULT_GRID))]
    fn nystrom(&self, count: usize, grid: usize) -> PyResult<Vec<f64>> {
        spectral::nystrom_eigenvalues(&spectral::catalog_kernel(&self.spec, grid), count).map_err(err)
    }

    fn distortion_closed_form(&self) -> PyResult<f64> {
        Ok(constants::distortion_closed_form(&self.spec).map_err(err)?.value)
    }

    #[pyo3(signature = (count=asy::ASSEMBLY_COUNT, tail_order=DEFAULT_TAIL_ORDER))]
    fn distortion_numeric(&self, count: usize, tail_order: usize) -> PyResult<f64> {
        let s = &self.spec;
        let sp = spectral::spectrum(s, count).map_err(err)?;
        Ok(constants::distortion_numeric(&sp, s.ell, s.kappa, s.theta_ell, tail_order).map_err(err)?.value)
    }

    fn closed_law(&self) -> PyResult<PyLaw> {
        Ok(PyLaw { law: asy::closed_law(&self.spec).map_err(err)? })
    }

    #[pyo3(signature = (count=asy::ASSEMBLY_COUNT))]
    fn assembled_law(&self, count: usize) -> PyResult<PyLaw> {
        Ok(PyLaw { law: asy::assembled_law(&self.spec, count).map_err(err)? })
    }

    /// Probability oracle on the tail-completed spectrum.
    #[pyo3(signature = (roots=ORACLE_ROOTS, tail=DEFAULT_TAIL_LENGTH))]
    fn oracle(&self, roots: usize, tail: usize) -> PyResult<PyOracle> {
        let sp = spectral::spectrum(&self.spec, roots).map_err(err)?;
        Ok(PyOracle { cs: oracle::tail_completed_spectrum(&sp, &self.spec, tail).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Process('{}')", self.spec.label())
    }
}

/// `P ~ K x^a exp(−E x^{−d})` in the norm (`x = ε`) or squared (`x = ε²`) variable.
#[pyclass(name = "Law", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLaw {
    law: SmallBallLaw,
}

#[pymethods]
impl PyLaw {
    #[new]
    #[pyo3(signature = (k, a, d, e, squared=false))]
    fn new(k: f64, a: f64, d: f64, e: f64, squared: bool) -> Self {
        let law = SmallBallLaw::norm(k, a, d, e);
        PyLaw { law: if squared { SmallBallLaw { variable: asy::LawVariable::SquaredR, ..law } } else { law } }
    }

    #[getter(K)]
    fn k(&self) -> f64 {
        self.law.k
    }
    #[getter]
    fn a(&self) -> f64 {
        self.law.a
    }
    #[getter]
    fn d(&self) -> f64 {
        self.law.d
    }
    #[getter(E)]
    fn e(&self) -> f64 {
        self.law.e
    }
    #[getter]
    fn variable(&self) -> &'static str {
        match self.law.variable {
            asy::LawVariable::NormEps => "norm_eps",
            asy::LawVariable::SquaredR => "squared_r",
        }
    }

    fn to_squared(&self) -> Self {
        PyLaw { law: self.law.to_squared() }
    }

    fn to_norm(&self) -> Self {
        PyLaw { law: self.law.to_norm() }
    }

    /// Law of `s·V`.
    fn scale(&self, s: f64) -> Self {
        PyLaw { law: self.law.scale(s) }
    }

    /// Law of the sum of two independent squared norms.
    fn combine(&self, other: &PyLaw) -> PyResult<Self> {
        Ok(PyLaw { law: asy::combine_laws(&self.law, &other.law).map_err(err)? })
    }

    fn __call__(&self, x: f64) -> f64 {
        self.law.eval(x)
    }

    fn log_eval(&self, x: f64) -> f64 {
        self.law.log_eval(x)
    }

    fn rel_diff(&self, other: &PyLaw) -> f64 {
        self.law.rel_diff(&other.law)
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("K", self.law.k)?;
        d.set_item("a", self.law.a)?;
        d.set_item("d", self.law.d)?;
        d.set_item("E", self.law.e)?;
        d.set_item("variable", self.variable())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let l = &self.law;
        format!("Law(K={}, a={}, d={}, E={}, variable='{}')", l.k, l.a, l.d, l.e, self.variable())
    }
}

#[pyclass(name = "Oracle", frozen)]
struct PyOracle {
    cs: CompletedSpectrum,
}

#[pymethods]
impl PyOracle {
    /// `P{‖X‖ ≤ ε}` by inversion along the saddle line.
    fn saddlepoint(&self, py: Python<'_>, eps: f64) -> PyResult<f64> {
        py.detach(|| oracle::prob_saddlepoint(&self.cs, eps)).map_err(err)
    }

    /// `P{‖X‖ ≤ ε}` by characteristic-function inversion.
    fn imhof(&self, py: Python<'_>, eps: f64) -> PyResult<f64> {
        py.detach(|| oracle::prob_imhof(&self.cs, eps)).map_err(err)
    }

    fn lugannani_rice(&self, eps: f64) -> PyResult<f64> {
        oracle::lugannani_rice(&self.cs, eps).map_err(err)
    }

    #[getter]
    fn trace(&self) -> f64 {
        self.cs.trace()
    }

    #[getter]
    fn junction_error(&self) -> f64 {
        self.cs.junction_error
    }

    fn __len__(&self) -> usize {
        self.cs.len()
    }
}

/// Process ids accepted by `Process`.
#[pyfunction]
fn families() -> Vec<&'static str> {
    Family::ALL.iter().map(|f| f.id()).collect()
}

#[pyfunction]
fn vandermonde(values: Vec<Complex64>) -> f64 {
    constants::vandermonde(&values)
}

#[pyfunction]
fn psi_delta(delta: f64, zeta: Complex64) -> Complex64 {
    constants::psi_delta(delta, zeta)
}

/// Leading-order law of a BVP with the given data.
#[pyfunction]
fn general_law(ell: usize, kappa: usize, theta_ell: f64, c_dist: f64) -> PyResult<PyLaw> {
    Ok(PyLaw { law: asy::general_law(ell, kappa, theta_ell, c_dist).map_err(err)? })
}

#[pyfunction]
fn asymptotic_eval(law: &PyLaw, eps: f64) -> f64 {
    oracle::asymptotic_eval(&law.law, eps)
}

/// `∏ (μᵃ_n / μᵇ_n)^{1/2}`, the limiting ratio of small-ball probabilities.
#[pyfunction]
fn comparison_ratio(mu_a: Vec<f64>, mu_b: Vec<f64>) -> PyResult<f64> {
    Ok(asy::comparison_ratio(&mu_a, &mu_b).map_err(err)?.value)
}

/// Oracle on an explicit finite list of eigenvalues.
#[pyfunction]
fn finite_oracle(lambdas: Vec<f64>) -> PyResult<PyOracle> {
    Ok(PyOracle { cs: CompletedSpectrum::finite(lambdas).map_err(err)? })
}

/// β patterns grouped by equal `K`, largest first: `[(K, ["00", "11"]), ...]`.
#[pyfunction]
#[pyo3(signature = (family, m, c=None, l=None))]
fn rank_beta_patterns(family: &str, m: usize, c: Option<f64>, l: Option<usize>) -> PyResult<Vec<(f64, Vec<String>)>> {
    let f: Family = family.parse().map_err(err)?;
    let groups = asy::rank_beta_patterns(f, &ProcessParams { c, l, m: Some(m), beta: Some(vec![0; m]) }).map_err(err)?;
    Ok(groups
        .into_iter()
        .map(|g| (g.k, g.patterns.iter().map(|p| p.iter().map(|b| char::from(b'0' + b)).collect()).collect()))
        .collect())
}

/// Run a verification suite; one dict per check.
#[pyfunction]
#[pyo3(signature = (suite="all", seed=0, tol=None))]
fn run_verify<'py>(py: Python<'py>, suite: &str, seed: u64, tol: Option<f64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s: Suite = suite.parse().map_err(err)?;
    let cfg = VerifyConfig { seed, tol, ..VerifyConfig::default() };
    let rows = py.detach(|| verify::run_suite(s, &cfg));
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("suite", r.suite.id())?;
            d.set_item("name", &r.name)?;
            d.set_item("measured", r.measured)?;
            d.set_item("target", r.target)?;
            d.set_item("tol", r.tol)?;
            d.set_item("relation", r.relation.id())?;
            d.set_item("pass", r.pass)?;
            d.set_item("note", &r.note)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn smallball(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyProcess>()?;
    m.add_class::<PyLaw>()?;
    m.add_class::<PyOracle>()?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(vandermonde, m)?)?;
    m.add_function(wrap_pyfunction!(psi_delta, m)?)?;
    m.add_function(wrap_pyfunction!(general_law, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_eval, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(finite_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(rank_beta_patterns, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
