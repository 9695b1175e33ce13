//! Python bindings: `import hbspace_py`.
//!
//! Complex values cross the boundary as Python `complex`; coefficient
//! sequences as lists.

use hbspace::bounds::{classify as classify_norms, truncated_opnorm, GrowthModel};
use hbspace::hayman::{compare_exact, HaymanModel};
use hbspace::pythagoras::{pair_from_phi, PythagoreanPair, DEFAULT_GRID};
use hbspace::series::{phi_coeffs, PhiSpec};
use hbspace::space::{gram, hb_inner, hb_norm, kernel_poly, HbContext, HbPolynomial};
use hbspace::summability::{apply_row, cesaro_row as cesaro, SummabilityRow};
use hbspace::{Complex64, HbError};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: HbError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn poly(coeffs: Vec<Complex64>) -> HbPolynomial {
    if coeffs.is_empty() {
        HbPolynomial::zero()
    } else {
        HbPolynomial::new(coeffs)
    }
}

/// A choice of φ = b/a, parsed from the same strings the CLI accepts.
#[pyclass(name = "Phi", frozen)]
struct PyPhi {
    inner: PhiSpec,
}

#[pymethods]
impl PyPhi {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPhi {
            inner: text.parse().map_err(err)?,
        })
    }

    /// Taylor coefficients c_0..=c_trunc.
    fn coeffs(&self, trunc: usize) -> PyResult<Vec<Complex64>> {
        Ok(phi_coeffs(&self.inner, trunc).map_err(err)?.values())
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Phi('{}')", self.inner)
    }
}

/// Norm data of H(b) for a fixed φ, truncated at `trunc` coefficients.
#[pyclass(name = "Space", frozen)]
struct PySpace {
    inner: HbContext,
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(phi: &PyPhi, trunc: usize) -> PyResult<Self> {
        Ok(PySpace {
            inner: HbContext::from_phi(&phi.inner, trunc).map_err(err)?,
        })
    }

    #[getter]
    fn trunc(&self) -> usize {
        self.inner.trunc()
    }

    /// ‖z^n‖ for n = 0..=trunc.
    fn monomial_norms(&self) -> Vec<f64> {
        self.inner.monomial_norms()
    }

    fn norm(&self, p: Vec<Complex64>) -> PyResult<f64> {
        hb_norm(&self.inner, &poly(p)).map_err(err)
    }

    fn inner_product(&self, p: Vec<Complex64>, q: Vec<Complex64>) -> PyResult<Complex64> {
        hb_inner(&self.inner, &poly(p), &poly(q)).map_err(err)
    }

    /// Rows of the Gram matrix ⟨z^m, z^n⟩, 0 ≤ m, n ≤ size.
    fn gram(&self, size: usize) -> PyResult<Vec<Vec<Complex64>>> {
        let g = gram(&self.inner, size).map_err(err)?;
        Ok(g.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// Norm of the summation operator with the given row weights on
    /// polynomials of degree ≤ gram_size.
    #[pyo3(signature = (weights, gram_size, a0=1.0))]
    fn opnorm(&self, weights: Vec<Complex64>, gram_size: usize, a0: f64) -> PyResult<OpNorm> {
        let row = SummabilityRow::new(weights).map_err(err)?;
        let e = truncated_opnorm(&self.inner, &row, gram_size, a0).map_err(err)?;
        Ok(OpNorm {
            n: e.n,
            gram_size: e.gram_size,
            value: e.value,
            lemma_bound: e.lemma_bound,
            iterations: e.iterations,
            converged: e.converged,
        })
    }
}

#[pyclass(get_all, frozen)]
struct OpNorm {
    n: usize,
    gram_size: usize,
    value: f64,
    lemma_bound: f64,
    iterations: usize,
    converged: bool,
}

#[pymethods]
impl OpNorm {
    fn __repr__(&self) -> String {
        format!(
            "OpNorm(n={}, N={}, value={}, lemma_bound={})",
            self.n, self.gram_size, self.value, self.lemma_bound
        )
    }
}

/// The pair (a, b) with |a|² + |b|² = 1 on the circle and b/a = φ.
#[pyclass(name = "Pair", frozen)]
struct PyPair {
    inner: PythagoreanPair,
    phi: PhiSpec,
}

#[pymethods]
impl PyPair {
    #[new]
    #[pyo3(signature = (phi, trunc=1024, grid=DEFAULT_GRID))]
    fn new(phi: &PyPhi, trunc: usize, grid: usize) -> PyResult<Self> {
        Ok(PyPair {
            inner: pair_from_phi(&phi.inner, grid, trunc).map_err(err)?,
            phi: phi.inner.clone(),
        })
    }

    #[getter]
    fn a0(&self) -> f64 {
        self.inner.a0
    }

    #[getter]
    fn a(&self) -> Vec<Complex64> {
        self.inner.a.values()
    }

    #[getter]
    fn b(&self) -> Vec<Complex64> {
        self.inner.b.values()
    }

    #[pyo3(signature = (points=4096, exclusion=0.1))]
    fn boundary_defect(&self, points: usize, exclusion: f64) -> f64 {
        self.inner.boundary_defect(&self.phi, points, exclusion)
    }

    /// Coefficients of the truncated reproducing kernel at `w`.
    fn kernel(&self, w: Complex64, trunc: usize) -> PyResult<Vec<Complex64>> {
        Ok(kernel_poly(&self.inner, w, trunc).map_err(err)?.coeffs)
    }
}

#[pyfunction]
fn cesaro_row(alpha: f64, n: usize) -> PyResult<Vec<f64>> {
    Ok(cesaro(alpha, n).map_err(err)?.weights.iter().map(|w| w.re).collect())
}

/// Applies row weights γ_{n0..nn} to the coefficients of `p`.
#[pyfunction]
fn apply_weights(weights: Vec<Complex64>, p: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let row = SummabilityRow::new(weights).map_err(err)?;
    Ok(apply_row(&row, &poly(p)).coeffs)
}

/// Returns `(case_i, case_ii, case_iii, model, summary)`; `model` is a
/// dict with the fitted parameters.
#[pyfunction]
fn classify(py: Python<'_>, norms: Vec<f64>, alpha: f64) -> PyResult<(bool, bool, bool, Py<PyAny>, String)> {
    let v = classify_norms(&norms, alpha).map_err(err)?;
    let model = pyo3::types::PyDict::new(py);
    match v.fitted_model {
        GrowthModel::PolynomialGrowth { rho } => {
            model.set_item("kind", "polynomial")?;
            model.set_item("rho", rho)?;
        }
        GrowthModel::StretchedExponential { c, delta } => {
            model.set_item("kind", "stretched")?;
            model.set_item("c", c)?;
            model.set_item("delta", delta)?;
        }
        GrowthModel::Bounded => model.set_item("kind", "bounded")?,
    }
    model.set_item("residual", v.residual)?;
    Ok((v.case_i, v.case_ii, v.case_iii, model.into_any().unbind(), v.summary()))
}

/// Rows `(n, log_exact, log_estimate, log_closed_form)`; estimates are
/// `None` for n = 0.
#[pyfunction]
fn hayman_compare(beta: f64, gamma: f64, n: Vec<usize>) -> PyResult<Vec<(usize, f64, Option<f64>, Option<f64>)>> {
    let model = HaymanModel::new(beta, gamma).map_err(err)?;
    Ok(compare_exact(&model, &n)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.n, r.log_exact, r.log_estimate, r.log_closed))
        .collect())
}

#[pymodule]
fn hbspace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhi>()?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyPair>()?;
    m.add_class::<OpNorm>()?;
    m.add_function(wrap_pyfunction!(cesaro_row, m)?)?;
    m.add_function(wrap_pyfunction!(apply_weights, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(hayman_compare, m)?)?;
    Ok(())
}
