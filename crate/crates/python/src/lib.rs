//! Python bindings for `ghcs`.

use ghcs::family::{Family, FamilyTag};
use ghcs::phase::{Analyzer, Signal};
use ghcs::states::{self, FockVector, StateSpec};
use ghcs::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameters(_)
        | Error::OutsideDomain(_)
        | Error::Divergence(_)
        | Error::CircleRefusal(_)
        | Error::Unsupported(_)
        | Error::Invalid(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

type Res<T> = PyResult<T>;

trait IntoPy<T> {
    fn py(self) -> Res<T>;
}

impl<T> IntoPy<T> for ghcs::Result<T> {
    fn py(self) -> Res<T> {
        self.map_err(py_err)
    }
}

/// Validated parameter lists (a; b).
#[pyclass(name = "ParameterSet", frozen, from_py_object)]
#[derive(Clone)]
struct PyParameterSet {
    inner: states::ParameterSet,
}

#[pymethods]
impl PyParameterSet {
    #[new]
    #[pyo3(signature = (a=Vec::new(), b=Vec::new()))]
    fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Res<Self> {
        let inner = states::validate(&a, &b).map_err(|v| PyValueError::new_err(v.to_string()))?;
        Ok(PyParameterSet { inner })
    }

    #[getter]
    fn a(&self) -> Vec<Complex64> {
        self.inner.a().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<Complex64> {
        self.inner.b().to_vec()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta()
    }

    /// "plane", "unit-disk", "circle-normalized", "circle-unnormalizable" or "divergent".
    fn domain(&self) -> &'static str {
        states::classify(&self.inner).kind.name()
    }

    fn reduced(&self) -> Self {
        PyParameterSet { inner: self.inner.reduced() }
    }

    fn rho(&self, n: usize) -> Res<f64> {
        states::rho(&self.inner, n).py()
    }

    fn normalization(&self, x: f64) -> Res<f64> {
        states::normalization(&self.inner, x).py()
    }

    fn __repr__(&self) -> String {
        format!("ParameterSet({})", self.inner.label())
    }
}

#[pyclass(name = "FockVector", frozen, from_py_object)]
#[derive(Clone)]
struct PyFockVector {
    inner: FockVector,
}

#[pymethods]
impl PyFockVector {
    #[new]
    fn new(coeffs: Vec<Complex64>) -> Self {
        PyFockVector { inner: FockVector::from_coeffs(coeffs) }
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs.clone()
    }

    #[getter]
    fn tail_bound(&self) -> f64 {
        self.inner.tail_bound
    }

    #[getter]
    fn normalized(&self) -> bool {
        self.inner.normalized
    }

    fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    fn inner(&self, other: &PyFockVector) -> Complex64 {
        self.inner.inner(&other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.coeffs.len()
    }
}

fn family(tag: &str, params: &PyParameterSet) -> Res<Family> {
    let tag: FamilyTag = tag.parse().py()?;
    Family::new(tag, &params.inner).py()
}

fn spec(params: &PyParameterSet, z: Complex64) -> Res<StateSpec> {
    StateSpec::new(params.inner.clone(), z).py()
}

#[pyfunction]
#[pyo3(signature = (params, z, tol=1e-12))]
fn fock_vector(params: &PyParameterSet, z: Complex64, tol: f64) -> Res<PyFockVector> {
    Ok(PyFockVector { inner: states::fock_vector(&spec(params, z)?, tol).py()? })
}

#[pyfunction]
fn overlap(params: &PyParameterSet, z: Complex64, zp: Complex64) -> Res<Complex64> {
    states::overlap(&params.inner, z, zp).py()
}

#[pyfunction]
fn f_coeff(params: &PyParameterSet, n: i64) -> f64 {
    ghcs::ladder::f_coeff(&params.inner, n)
}

#[pyfunction]
fn apply_lowering(params: &PyParameterSet, v: &PyFockVector) -> PyFockVector {
    PyFockVector { inner: ghcs::ladder::apply_lowering(&params.inner, &v.inner) }
}

#[pyfunction]
fn apply_raising(params: &PyParameterSet, v: &PyFockVector) -> Res<PyFockVector> {
    Ok(PyFockVector { inner: ghcs::ladder::apply_raising(&params.inner, &v.inner).py()? })
}

#[pyfunction]
#[pyo3(signature = (params, z, tol=1e-14))]
fn eigenvalue_residual(params: &PyParameterSet, z: Complex64, tol: f64) -> Res<f64> {
    ghcs::ladder::eigenvalue_residual(&spec(params, z)?, tol).py()
}

/// P(n) for n = 0, 1, ... until the truncation rule fires.
#[pyfunction]
fn pn_distribution(params: &PyParameterSet, z: Complex64) -> Res<Vec<f64>> {
    Ok(ghcs::photstat::pn_distribution(&spec(params, z)?).py()?.values)
}

/// (mean, Mandel Q) at x = |z|².
#[pyfunction]
fn mean_and_mandel(params: &PyParameterSet, x: f64) -> Res<(f64, f64)> {
    ghcs::photstat::mean_and_mandel(&params.inner, x).py()
}

#[pyfunction]
fn factorial_moment(params: &PyParameterSet, x: f64, k: u32) -> Res<f64> {
    ghcs::photstat::factorial_moment(&params.inner, x, k).py()
}

#[pyfunction]
fn closed_form_stats(family_tag: &str, params: &PyParameterSet, x: f64) -> Res<(f64, f64)> {
    let tag: FamilyTag = family_tag.parse().py()?;
    let s = ghcs::photstat::closed_form_stats(tag, &params.inner, x).py()?;
    Ok((s.mean, s.mandel_q))
}

#[pyfunction]
fn weight(family_tag: &str, params: &PyParameterSet, x: f64) -> Res<f64> {
    ghcs::weights::weight_family(&family(family_tag, params)?, x).py()
}

#[pyfunction]
fn weight_tilde(family_tag: &str, params: &PyParameterSet, x: f64) -> Res<f64> {
    ghcs::weights::weight_tilde_family(&family(family_tag, params)?, x).py()
}

/// Largest relative moment error for n ≤ n_max.
#[pyfunction]
#[pyo3(signature = (family_tag, params, n_max=20, quad_tol=1e-10))]
fn moment_check(family_tag: &str, params: &PyParameterSet, n_max: usize, quad_tol: f64) -> Res<f64> {
    let tag: FamilyTag = family_tag.parse().py()?;
    Ok(ghcs::weights::moment_check(tag, &params.inner, n_max, quad_tol).py()?.max_rel_error)
}

#[pyfunction]
fn circle_weight_attempt(params: &PyParameterSet) -> Res<f64> {
    ghcs::weights::circle_weight_attempt(&params.inner).py()
}

fn analyzer(obj: &Bound<'_, PyAny>) -> Res<Analyzer> {
    if let Ok(p) = obj.extract::<PyParameterSet>() {
        return Ok(Analyzer::Params(p.inner));
    }
    let s: String = obj.extract()?;
    match s.to_ascii_lowercase().as_str() {
        "q" => Ok(Analyzer::Q),
        "pb" => Ok(Analyzer::PB),
        _ => Err(PyValueError::new_err(format!("analyzer must be 'q', 'pb' or a ParameterSet, got '{s}'"))),
    }
}

/// (theta, values, residual) for a pure-state signal.
#[pyfunction]
#[pyo3(signature = (signal, analyzer_spec, points=721))]
fn phase_distribution(
    signal: &PyFockVector,
    analyzer_spec: &Bound<'_, PyAny>,
    points: usize,
) -> Res<(Vec<f64>, Vec<f64>, f64)> {
    let an = analyzer(analyzer_spec)?;
    let grid = ghcs::phase::theta_grid(points, -std::f64::consts::PI);
    let d = ghcs::phase::phase_distribution(&Signal::Vector(signal.inner.clone()), &an, &grid).py()?;
    Ok((d.theta, d.values, d.residual))
}

#[pyfunction]
fn husimi_q(signal: &PyFockVector, alpha: Complex64) -> f64 {
    ghcs::phase::husimi_q(&signal.inner, alpha)
}

#[pyfunction]
fn gh_husimi(signal: &PyFockVector, family_tag: &str, params: &PyParameterSet, z: Complex64) -> Res<f64> {
    ghcs::phase::gh_husimi(&signal.inner, &family(family_tag, params)?, z).py()
}

#[pyfunction]
fn self_dual_husimi(family_tag: &str, params: &PyParameterSet, z: Complex64, z_tilde: Complex64) -> Res<f64> {
    ghcs::phase::self_dual_husimi(&family(family_tag, params)?, z, z_tilde).py()
}

#[pyfunction]
fn analytic_rep(params: &PyParameterSet, psi: &PyFockVector, zeta: Complex64) -> Res<Complex64> {
    Ok(ghcs::repr::analytic_rep(&params.inner, &psi.inner, zeta).py()?.value)
}

#[pyfunction]
fn ghcs_wavefunction(family_tag: &str, params: &PyParameterSet, psi: &PyFockVector, z: Complex64) -> Res<Complex64> {
    ghcs::repr::ghcs_wavefunction(&family(family_tag, params)?, &psi.inner, z).py()
}

#[pyfunction]
#[pyo3(signature = (family_tag, params, phi, psi, quad_tol=1e-10))]
fn inner_product_via_measure(
    family_tag: &str,
    params: &PyParameterSet,
    phi: &PyFockVector,
    psi: &PyFockVector,
    quad_tol: f64,
) -> Res<Complex64> {
    ghcs::repr::inner_product_via_measure(&family(family_tag, params)?, &phi.inner, &psi.inner, quad_tol).py()
}

#[pymodule]
fn ghcs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParameterSet>()?;
    m.add_class::<PyFockVector>()?;
    m.add_function(wrap_pyfunction!(fock_vector, m)?)?;
    m.add_function(wrap_pyfunction!(overlap, m)?)?;
    m.add_function(wrap_pyfunction!(f_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(apply_lowering, m)?)?;
    m.add_function(wrap_pyfunction!(apply_raising, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue_residual, m)?)?;
    m.add_function(wrap_pyfunction!(pn_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(mean_and_mandel, m)?)?;
    m.add_function(wrap_pyfunction!(factorial_moment, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_stats, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(weight_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(moment_check, m)?)?;
    m.add_function(wrap_pyfunction!(circle_weight_attempt, m)?)?;
    m.add_function(wrap_pyfunction!(phase_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(husimi_q, m)?)?;
    m.add_function(wrap_pyfunction!(gh_husimi, m)?)?;
    m.add_function(wrap_pyfunction!(self_dual_husimi, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_rep, m)?)?;
    m.add_function(wrap_pyfunction!(ghcs_wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(inner_product_via_measure, m)?)?;
    Ok(())
}
