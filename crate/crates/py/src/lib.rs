//! Python bindings: `import pyfastexp`.
//!
//! Series cross the boundary as lists of Python `complex`; errors surface
//! as `ValueError` (contract and domain violations) or `ArithmeticError`
//! (non-finite values).

use std::collections::BTreeMap;

use fastexp::cli::random_series as rust_random_series;
use fastexp::{Complex64, CountReport, Error};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NonFinite(_) => PyArithmeticError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type Coeffs = Vec<Complex64>;

/// Transform tallies as two `{length: count}` dicts.
#[pyclass(name = "CountReport", module = "pyfastexp", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCountReport {
    forward: BTreeMap<usize, u64>,
    inverse: BTreeMap<usize, u64>,
}

impl From<CountReport> for PyCountReport {
    fn from(c: CountReport) -> Self {
        PyCountReport {
            forward: c.forward,
            inverse: c.inverse,
        }
    }
}

#[pymethods]
impl PyCountReport {
    /// Forward plus inverse transforms of one length.
    fn total_at(&self, length: usize) -> u64 {
        self.forward.get(&length).copied().unwrap_or(0) + self.inverse.get(&length).copied().unwrap_or(0)
    }

    fn total(&self) -> u64 {
        self.forward.values().chain(self.inverse.values()).sum()
    }

    fn __repr__(&self) -> String {
        format!("CountReport(forward={:?}, inverse={:?})", self.forward, self.inverse)
    }
}

/// FFT context with transform counters.
#[pyclass(name = "FftContext", module = "pyfastexp")]
pub struct PyFftContext {
    inner: fastexp::FftContext,
}

#[pymethods]
impl PyFftContext {
    #[new]
    fn new(max_len: usize) -> PyResult<Self> {
        Ok(PyFftContext {
            inner: fastexp::FftContext::new(max_len).map_err(to_py_err)?,
        })
    }

    fn forward(&mut self, coeffs: Coeffs, length: usize) -> PyResult<Coeffs> {
        let t = self.inner.forward_transform(&coeffs, length).map_err(to_py_err)?;
        Ok(t.values().to_vec())
    }

    fn inverse(&mut self, values: Coeffs) -> PyResult<Coeffs> {
        let t = fastexp::Transform::from_values(values).map_err(to_py_err)?;
        self.inner.inverse_transform(&t).map_err(to_py_err)
    }

    fn counts(&self) -> PyCountReport {
        self.inner.snapshot_counts().into()
    }
}

#[pyclass(name = "ExpPlan", module = "pyfastexp", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyExpPlan {
    n: usize,
    s: usize,
    m: usize,
    r: usize,
    padded_n: usize,
    is_naive: bool,
}

impl From<fastexp::ExpPlan> for PyExpPlan {
    fn from(p: fastexp::ExpPlan) -> Self {
        PyExpPlan {
            n: p.n,
            s: p.s(),
            m: p.m(),
            r: p.r(),
            padded_n: p.padded_n(),
            is_naive: p.is_naive(),
        }
    }
}

#[pymethods]
impl PyExpPlan {
    fn __repr__(&self) -> String {
        format!(
            "ExpPlan(n={}, s={}, m={}, padded_n={}, is_naive={})",
            self.n,
            self.s,
            self.m,
            self.padded_n,
            if self.is_naive { "True" } else { "False" }
        )
    }
}

/// Result of `exp_series_report`.
#[pyclass(name = "ExpResult", module = "pyfastexp", frozen, get_all)]
pub struct PyExpResult {
    coefficients: Coeffs,
    plan: PyExpPlan,
    top_level: PyCountReport,
    all_levels: PyCountReport,
}

#[pyfunction]
fn exp_series(f: Coeffs, n: usize) -> PyResult<Coeffs> {
    fastexp::exp_series(&f, n).map(|s| s.into_inner()).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (f, n, naive_threshold = fastexp::driver::DEFAULT_NAIVE_THRESHOLD))]
fn exp_series_report(f: Coeffs, n: usize, naive_threshold: usize) -> PyResult<PyExpResult> {
    let cfg = fastexp::ExpConfig { naive_threshold };
    let out = fastexp::exp_series_with(&f, n, &cfg).map_err(to_py_err)?;
    Ok(PyExpResult {
        coefficients: out.series.into_inner(),
        plan: out.plan.into(),
        top_level: out.top_level.into(),
        all_levels: out.all_levels.into(),
    })
}

#[pyfunction]
#[pyo3(signature = (n, naive_threshold = fastexp::driver::DEFAULT_NAIVE_THRESHOLD))]
fn plan_parameters(n: usize, naive_threshold: usize) -> PyResult<PyExpPlan> {
    let cfg = fastexp::ExpConfig { naive_threshold };
    fastexp::plan_parameters(n, &cfg).map(Into::into).map_err(to_py_err)
}

/// Runs the blockwise exponential directly. Returns the coefficients of
/// `exp(f) mod x^{2sm}` and the transform tallies it consumed.
#[pyfunction]
fn algorithm1_exp(s: usize, f: Coeffs, g0: Coeffs, u: Coeffs) -> PyResult<(Coeffs, PyCountReport)> {
    let g0 = fastexp::Block::new(g0).map_err(to_py_err)?;
    let u = fastexp::Block::new(u).map_err(to_py_err)?;
    let mut ctx = fastexp::FftContext::with_lengths(&[2 * g0.m()]).map_err(to_py_err)?;
    let g = fastexp::algorithm1_exp(&mut ctx, s, &f, &g0, &u).map_err(to_py_err)?;
    Ok((g.into_inner(), ctx.snapshot_counts().into()))
}

#[pyfunction]
fn newton_reciprocal(h: Coeffs, n: usize) -> PyResult<Coeffs> {
    fastexp::newton_reciprocal(&h, n).map(|s| s.into_inner()).map_err(to_py_err)
}

#[pyfunction]
fn naive_exp(f: Coeffs, n: usize) -> PyResult<Coeffs> {
    fastexp::naive_exp(&f, n).map(|s| s.into_inner()).map_err(to_py_err)
}

#[pyfunction]
fn naive_log(g: Coeffs, n: usize) -> PyResult<Coeffs> {
    fastexp::naive_log(&g, n).map(|s| s.into_inner()).map_err(to_py_err)
}

#[pyfunction]
fn naive_mul(a: Coeffs, b: Coeffs, n: usize) -> Coeffs {
    fastexp::naive_mul(&a, &b, n).into_inner()
}

#[pyfunction]
fn naive_reciprocal(h: Coeffs, n: usize) -> PyResult<Coeffs> {
    fastexp::naive_reciprocal(&h, n).map(|s| s.into_inner()).map_err(to_py_err)
}

#[pyfunction]
fn delta(f: Coeffs) -> Coeffs {
    fastexp::delta(&f).into_inner()
}

#[pyfunction]
fn delta_k_apply(block: Coeffs, k: usize) -> PyResult<Coeffs> {
    let b = fastexp::Block::new(block).map_err(to_py_err)?;
    Ok(fastexp::delta_k_apply(&b, k).into_coeffs())
}

#[pyfunction]
fn delta_k_inverse(block: Coeffs, k: usize) -> PyResult<Coeffs> {
    let b = fastexp::Block::new(block).map_err(to_py_err)?;
    fastexp::delta_k_inverse(&b, k).map(|b| b.into_coeffs()).map_err(to_py_err)
}

/// The seeded random input family used by the command-line tool.
#[pyfunction]
fn random_series(seed: u64, n: usize) -> Coeffs {
    rust_random_series(seed, n).into_inner()
}

#[pymodule]
fn pyfastexp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCountReport>()?;
    m.add_class::<PyFftContext>()?;
    m.add_class::<PyExpPlan>()?;
    m.add_class::<PyExpResult>()?;
    m.add_function(wrap_pyfunction!(exp_series, m)?)?;
    m.add_function(wrap_pyfunction!(exp_series_report, m)?)?;
    m.add_function(wrap_pyfunction!(plan_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(algorithm1_exp, m)?)?;
    m.add_function(wrap_pyfunction!(newton_reciprocal, m)?)?;
    m.add_function(wrap_pyfunction!(naive_exp, m)?)?;
    m.add_function(wrap_pyfunction!(naive_log, m)?)?;
    m.add_function(wrap_pyfunction!(naive_mul, m)?)?;
    m.add_function(wrap_pyfunction!(naive_reciprocal, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_k_apply, m)?)?;
    m.add_function(wrap_pyfunction!(delta_k_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(random_series, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_python_exceptions() {
        Python::attach(|py| {
            let e = to_py_err(Error::NonzeroConstantTerm);
            assert!(e.is_instance_of::<PyValueError>(py));
            assert!(e.to_string().contains("constant term must be zero"));
            let e = to_py_err(Error::NonFinite("exp"));
            assert!(e.is_instance_of::<PyArithmeticError>(py));
        });
    }

    #[test]
    fn algorithm1_reports_its_transforms() {
        let re = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        let (g, counts) = algorithm1_exp(2, re(&[0.0, 1.0]), re(&[1.0, 1.0]), re(&[1.0, -1.0])).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(counts.total_at(4), 22);
    }

    #[test]
    fn module_is_importable_from_rust() {
        Python::attach(|py| {
            let m = PyModule::new(py, "pyfastexp").unwrap();
            pyfastexp(&m).unwrap();
            let plan = m.getattr("plan_parameters").unwrap().call1((1024,)).unwrap();
            assert_eq!(plan.getattr("s").unwrap().extract::<usize>().unwrap(), 8);
            let g: Coeffs = m
                .getattr("exp_series")
                .unwrap()
                .call1((vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 3))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(g[2], Complex64::new(0.5, 0.0));
        });
    }
}
