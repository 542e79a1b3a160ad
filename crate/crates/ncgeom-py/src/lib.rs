//! Python bindings: trig polynomials, algebra elements, forms, derivations,
//! the bigraded calculus, connection/curvature operations and the
//! Yang-Mills-Higgs minimizer. Values round-trip to JSON with the same
//! schema as the CLI.

use ncgeom::connect;
use ncgeom::ymh;
use ncgeom::{AlgElement, Calculus, Derivation, NCForm, TrigPoly};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: ncgeom::NcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "TrigPoly")]
#[derive(Clone)]
struct PyTrigPoly {
    inner: TrigPoly,
}

#[pymethods]
impl PyTrigPoly {
    #[new]
    fn new(dim: usize) -> Self {
        PyTrigPoly { inner: TrigPoly::zero(dim) }
    }

    #[staticmethod]
    fn constant(dim: usize, c: Complex64) -> Self {
        PyTrigPoly { inner: TrigPoly::constant(dim, c) }
    }

    #[staticmethod]
    fn cos(dim: usize, k: Vec<i64>) -> Self {
        PyTrigPoly { inner: TrigPoly::cos(dim, &k) }
    }

    #[staticmethod]
    fn sin(dim: usize, k: Vec<i64>) -> Self {
        PyTrigPoly { inner: TrigPoly::sin(dim, &k) }
    }

    #[staticmethod]
    fn monomial(dim: usize, k: Vec<i64>, c: Complex64) -> Self {
        PyTrigPoly { inner: TrigPoly::monomial(dim, &k, c) }
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn coeff(&self, k: Vec<i64>) -> Complex64 {
        self.inner.coeff(&k)
    }

    fn terms(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.inner.iter_terms().collect()
    }

    fn add(&self, other: &PyTrigPoly) -> PyResult<Self> {
        Ok(PyTrigPoly { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn sub(&self, other: &PyTrigPoly) -> PyResult<Self> {
        Ok(PyTrigPoly { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn mul(&self, other: &PyTrigPoly) -> PyResult<Self> {
        Ok(PyTrigPoly { inner: self.inner.mul(&other.inner).map_err(err)? })
    }

    fn scale(&self, s: Complex64) -> Self {
        PyTrigPoly { inner: self.inner.scale(s) }
    }

    fn conj(&self) -> Self {
        PyTrigPoly { inner: self.inner.conj() }
    }

    fn partial(&self, mu: usize) -> PyResult<Self> {
        Ok(PyTrigPoly { inner: self.inner.partial(mu).map_err(err)? })
    }

    fn integrate(&self) -> Complex64 {
        self.inner.integrate()
    }

    fn eval(&self, x: Vec<f64>) -> Complex64 {
        self.inner.eval(&x)
    }

    fn max_coeff(&self) -> f64 {
        self.inner.max_coeff()
    }

    fn is_zero(&self, tol: f64) -> bool {
        self.inner.is_zero(tol)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyTrigPoly { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("TrigPoly(dim={}, terms={})", self.inner.dim(), self.inner.num_terms())
    }
}

#[pyclass(name = "AlgElement")]
#[derive(Clone)]
struct PyAlgElement {
    inner: AlgElement,
}

#[pymethods]
impl PyAlgElement {
    #[new]
    fn new(n: usize, d: usize) -> Self {
        PyAlgElement { inner: AlgElement::zeros(n, d) }
    }

    #[staticmethod]
    fn identity(n: usize, d: usize) -> Self {
        PyAlgElement { inner: AlgElement::identity(n, d) }
    }

    #[staticmethod]
    fn central(n: usize, f: &PyTrigPoly) -> Self {
        PyAlgElement { inner: AlgElement::central(n, &f.inner) }
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn d(&self) -> usize {
        self.inner.d()
    }

    fn entry(&self, i: usize, j: usize) -> PyTrigPoly {
        PyTrigPoly { inner: self.inner.entry(i, j).clone() }
    }

    fn set_entry(&mut self, i: usize, j: usize, f: &PyTrigPoly) {
        self.inner.set_entry(i, j, f.inner.clone());
    }

    fn add(&self, other: &PyAlgElement) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn sub(&self, other: &PyAlgElement) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn mul(&self, other: &PyAlgElement) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.mul(&other.inner).map_err(err)? })
    }

    fn comm(&self, other: &PyAlgElement) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.comm(&other.inner).map_err(err)? })
    }

    fn scale(&self, s: Complex64) -> Self {
        PyAlgElement { inner: self.inner.scale(s) }
    }

    fn scale_fn(&self, f: &PyTrigPoly) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.scale_fn(&f.inner).map_err(err)? })
    }

    fn star(&self) -> Self {
        PyAlgElement { inner: self.inner.star() }
    }

    fn trace(&self) -> PyTrigPoly {
        PyTrigPoly { inner: self.inner.trace() }
    }

    fn det(&self) -> PyResult<PyTrigPoly> {
        Ok(PyTrigPoly { inner: self.inner.det().map_err(err)? })
    }

    fn partial(&self, mu: usize) -> PyResult<Self> {
        Ok(PyAlgElement { inner: self.inner.partial(mu).map_err(err)? })
    }

    fn max_coeff(&self) -> f64 {
        self.inner.max_coeff()
    }

    fn is_zero(&self, tol: f64) -> bool {
        self.inner.is_zero(tol)
    }

    fn approx_eq(&self, other: &PyAlgElement, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyAlgElement { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("AlgElement(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

#[pyclass(name = "Derivation")]
#[derive(Clone)]
struct PyDerivation {
    inner: Derivation,
}

#[pymethods]
impl PyDerivation {
    #[new]
    fn new(vector: Vec<PyTrigPoly>, inner_part: &PyAlgElement) -> PyResult<Self> {
        let v: Vec<TrigPoly> = vector.into_iter().map(|f| f.inner).collect();
        Ok(PyDerivation { inner: Derivation::new(v, inner_part.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn coordinate(n: usize, d: usize, mu: usize) -> PyResult<Self> {
        Ok(PyDerivation { inner: Derivation::coordinate(n, d, mu).map_err(err)? })
    }

    #[staticmethod]
    fn inner(gamma: &PyAlgElement) -> PyResult<Self> {
        Ok(PyDerivation { inner: Derivation::inner(gamma.inner.clone()).map_err(err)? })
    }

    fn apply(&self, s: &PyAlgElement) -> PyResult<PyAlgElement> {
        Ok(PyAlgElement { inner: self.inner.apply(&s.inner).map_err(err)? })
    }

    fn bracket(&self, other: &PyDerivation) -> PyResult<Self> {
        Ok(PyDerivation { inner: self.inner.bracket(&other.inner).map_err(err)? })
    }

    fn anchor(&self) -> Vec<PyTrigPoly> {
        self.inner.anchor().iter().map(|f| PyTrigPoly { inner: f.clone() }).collect()
    }

    fn inner_part(&self) -> PyAlgElement {
        PyAlgElement { inner: self.inner.inner_part().clone() }
    }

    fn __repr__(&self) -> String {
        format!("Derivation(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

#[pyclass(name = "NCForm")]
#[derive(Clone)]
struct PyNCForm {
    inner: NCForm,
}

#[pymethods]
impl PyNCForm {
    #[new]
    fn new(n: usize, d: usize, degree: usize) -> Self {
        PyNCForm { inner: NCForm::zero(n, d, degree) }
    }

    #[staticmethod]
    fn from_alg(s: &PyAlgElement) -> Self {
        PyNCForm { inner: NCForm::from_alg(&s.inner) }
    }

    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn add_term(&mut self, dx: Vec<usize>, theta: Vec<usize>, coef: &PyAlgElement) -> PyResult<()> {
        self.inner.add_term(&dx, &theta, &coef.inner).map_err(err)
    }

    fn coeff(&self, dx: Vec<usize>, theta: Vec<usize>) -> PyAlgElement {
        PyAlgElement { inner: self.inner.coeff(&dx, &theta) }
    }

    fn add(&self, other: &PyNCForm) -> PyResult<Self> {
        Ok(PyNCForm { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn sub(&self, other: &PyNCForm) -> PyResult<Self> {
        Ok(PyNCForm { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn neg(&self) -> Self {
        PyNCForm { inner: self.inner.neg() }
    }

    fn scale(&self, s: Complex64) -> Self {
        PyNCForm { inner: self.inner.scale(s) }
    }

    fn max_coeff(&self) -> f64 {
        self.inner.max_coeff()
    }

    fn is_zero(&self, tol: f64) -> bool {
        self.inner.is_zero(tol)
    }

    fn is_horizontal(&self, tol: f64) -> bool {
        self.inner.is_horizontal(tol)
    }

    fn approx_eq(&self, other: &PyNCForm, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyNCForm { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "NCForm(n={}, d={}, degree={}, terms={})",
            self.inner.n(),
            self.inner.d(),
            self.inner.degree(),
            self.inner.num_terms()
        )
    }
}

#[pyclass(name = "Calculus")]
struct PyCalculus {
    inner: Calculus,
}

#[pymethods]
impl PyCalculus {
    #[new]
    fn new(n: usize, d: usize) -> PyResult<Self> {
        Ok(PyCalculus { inner: Calculus::new(n, d).map_err(err)? })
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn d(&self) -> usize {
        self.inner.d()
    }

    fn basis_len(&self) -> usize {
        self.inner.basis().len()
    }

    fn basis_elem(&self, a: usize) -> PyAlgElement {
        PyAlgElement {
            inner: AlgElement::from_matrix(self.inner.d(), self.inner.basis().elem(a)),
        }
    }

    /// The canonical inner 1-form i*theta.
    fn theta(&self) -> PyNCForm {
        PyNCForm { inner: self.inner.theta() }
    }

    fn dhat(&self, form: &PyNCForm) -> PyResult<PyNCForm> {
        Ok(PyNCForm { inner: self.inner.dhat(&form.inner).map_err(err)? })
    }

    fn wedge(&self, a: &PyNCForm, b: &PyNCForm) -> PyResult<PyNCForm> {
        Ok(PyNCForm { inner: self.inner.wedge(&a.inner, &b.inner).map_err(err)? })
    }

    fn form_eval(&self, form: &PyNCForm, ders: Vec<PyDerivation>) -> PyResult<PyAlgElement> {
        let ds: Vec<Derivation> = ders.into_iter().map(|x| x.inner).collect();
        Ok(PyAlgElement { inner: self.inner.form_eval(&form.inner, &ds).map_err(err)? })
    }

    fn koszul_eval(&self, form: &PyNCForm, ders: Vec<PyDerivation>) -> PyResult<PyAlgElement> {
        let ds: Vec<Derivation> = ders.into_iter().map(|x| x.inner).collect();
        Ok(PyAlgElement { inner: self.inner.koszul_eval(&form.inner, &ds).map_err(err)? })
    }

    fn contract(&self, x: &PyDerivation, form: &PyNCForm) -> PyResult<PyNCForm> {
        Ok(PyNCForm { inner: self.inner.contract(&x.inner, &form.inner).map_err(err)? })
    }

    fn lie_derive(&self, x: &PyDerivation, form: &PyNCForm) -> PyResult<PyNCForm> {
        Ok(PyNCForm { inner: self.inner.lie_derive(&x.inner, &form.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Calculus(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

/// alpha = sum_mu A_mu dx^mu - i*theta from traceless antihermitian potentials.
#[pyfunction]
fn alpha_from_potential(calc: &PyCalculus, a: Vec<PyAlgElement>) -> PyResult<PyNCForm> {
    let pot: Vec<AlgElement> = a.into_iter().map(|s| s.inner).collect();
    let alpha = connect::alpha_from_potential(&calc.inner, &pot).map_err(err)?;
    Ok(PyNCForm { inner: alpha.form().clone() })
}

#[pyfunction]
fn curvature(calc: &PyCalculus, omega: &PyNCForm) -> PyResult<PyNCForm> {
    let cf = connect::ConnectionForm::new(omega.inner.clone()).map_err(err)?;
    Ok(PyNCForm { inner: connect::curvature(&calc.inner, &cf).map_err(err)? })
}

#[pyfunction]
fn su_connection_residual(calc: &PyCalculus, omega: &PyNCForm) -> PyResult<f64> {
    let cf = connect::ConnectionForm::new(omega.inner.clone()).map_err(err)?;
    connect::su_connection_residual(&calc.inner, &cf).map_err(err)
}

#[pyfunction]
fn gauge_transform(calc: &PyCalculus, omega: &PyNCForm, u: &PyAlgElement) -> PyResult<PyNCForm> {
    let cf = connect::ConnectionForm::new(omega.inner.clone()).map_err(err)?;
    let t = connect::gauge_transform(&calc.inner, &cf, &u.inner).map_err(err)?;
    Ok(PyNCForm { inner: t.form().clone() })
}

/// Split omega against a reference SU connection: returns (a_mu list, B_a list,
/// r1, r2) where r1/r2 are the Higgs structure residuals.
#[pyfunction]
fn decompose(
    calc: &PyCalculus,
    omega: &PyNCForm,
    alpha_ref: &PyNCForm,
) -> PyResult<(Vec<PyAlgElement>, Vec<PyAlgElement>, f64, f64)> {
    let cf = connect::ConnectionForm::new(omega.inner.clone()).map_err(err)?;
    let rf = connect::ConnectionForm::new(alpha_ref.inner.clone()).map_err(err)?;
    let (_, h) = connect::decompose_omega(&calc.inner, &cf, &rf).map_err(err)?;
    let (r1, r2) = connect::higgs_conditions(&calc.inner, &h, &rf).map_err(err)?;
    let a = h.a.iter().map(|s| PyAlgElement { inner: s.clone() }).collect();
    let b = h.b.iter().map(|s| PyAlgElement { inner: s.clone() }).collect();
    Ok((a, b, r1, r2))
}

#[pyclass(name = "YmhProblem")]
struct PyYmhProblem {
    inner: ymh::YmhProblem,
}

#[pymethods]
impl PyYmhProblem {
    #[new]
    #[pyo3(signature = (n, d, cutoff=1, max_iters=2000, grad_tol=1e-8))]
    fn new(n: usize, d: usize, cutoff: i64, max_iters: usize, grad_tol: f64) -> PyResult<Self> {
        let mut cfg = ymh::ActionConfig::new(n, d);
        cfg.cutoff = cutoff;
        cfg.max_iters = max_iters;
        cfg.grad_tol = grad_tol;
        Ok(PyYmhProblem { inner: ymh::YmhProblem::new(cfg).map_err(err)? })
    }

    fn num_params(&self) -> usize {
        self.inner.num_params()
    }

    fn action(&self, p: Vec<f64>) -> PyResult<f64> {
        self.inner.action(&p).map_err(err)
    }

    fn gradient(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.gradient(&p).map_err(err)
    }

    fn params_to_form(&self, p: Vec<f64>) -> PyResult<PyNCForm> {
        let omega = self.inner.params_to_form(&p).map_err(err)?;
        Ok(PyNCForm { inner: omega.form().clone() })
    }

    fn params_from_form(&self, omega: &PyNCForm) -> PyResult<Vec<f64>> {
        let cf = connect::ConnectionForm::new(omega.inner.clone()).map_err(err)?;
        self.inner.params_from_form(&cf).map_err(err)
    }

    /// Gradient descent to a flat vacuum; returns (params, report dict).
    fn minimize<'py>(&self, py: Python<'py>, p0: Vec<f64>) -> PyResult<(Vec<f64>, Bound<'py, PyDict>)> {
        let (p, rep, _) = self.inner.minimize(&p0).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("action", rep.action)?;
        d.set_item("grad_norm", rep.grad_norm)?;
        d.set_item("curvature_norm", rep.curvature_norm)?;
        d.set_item("r1", rep.r1)?;
        d.set_item("r2", rep.r2)?;
        d.set_item("iterations", rep.iterations)?;
        Ok((p, d))
    }

    fn __repr__(&self) -> String {
        format!("YmhProblem(num_params={})", self.inner.num_params())
    }
}

/// Run the randomized invariant suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n, d, seed=7, trials=25))]
fn run_suite(py: Python<'_>, n: usize, d: usize, seed: u64, trials: usize) -> PyResult<Py<PyAny>> {
    let report = ncgeom::verify::run_suite(n, d, seed, trials).map_err(err)?;
    let json = serde_json::to_string(&report).map_err(json_err)?;
    let module = py.import("json")?;
    let obj = module.call_method1("loads", (json,))?;
    Ok(obj.unbind())
}

#[pymodule]
fn ncgeom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrigPoly>()?;
    m.add_class::<PyAlgElement>()?;
    m.add_class::<PyDerivation>()?;
    m.add_class::<PyNCForm>()?;
    m.add_class::<PyCalculus>()?;
    m.add_class::<PyYmhProblem>()?;
    m.add_function(wrap_pyfunction!(alpha_from_potential, m)?)?;
    m.add_function(wrap_pyfunction!(curvature, m)?)?;
    m.add_function(wrap_pyfunction!(su_connection_residual, m)?)?;
    m.add_function(wrap_pyfunction!(gauge_transform, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
