use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use hisign::arith::{format_rational, parse_rational, Rational};
use hisign::forms::{self, FlagshipConfig, HalfIntegralForm};
use hisign::genfun::{self, Polynomial};
use hisign::hecke;
use hisign::qseries::{expand_recipe as expand, EtaRecipe};
use hisign::shimura;
use hisign::signscan::{self, ScanMode};
use hisign::suite;

fn err(e: hisign::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(x),))
}

fn to_fractions<'py>(py: Python<'py>, xs: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = xs.iter().map(|x| to_fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Accepts `int`, `fractions.Fraction` or a `"num/den"` string.
fn from_py(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_cow()?).map_err(err)
}

fn from_py_list(xs: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    xs.try_iter()?.map(|x| from_py(&x?)).collect()
}

/// A half-integral weight cusp form given by a truncated q-expansion.
#[pyclass(name = "Form", frozen)]
struct PyForm {
    inner: HalfIntegralForm,
}

#[pymethods]
impl PyForm {
    /// Loads a form file written by `hisign expand`.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyForm { inner: forms::load_form(path).map_err(err)? })
    }

    /// `eta(2z)^12 theta(z)` in weight 13/2, level 4.
    #[staticmethod]
    #[pyo3(signature = (prec = 10_000))]
    fn flagship(prec: u64) -> PyResult<Self> {
        let inner = FlagshipConfig { prec, ..Default::default() }.build().map_err(err)?;
        Ok(PyForm { inner })
    }

    #[getter]
    fn level(&self) -> u64 {
        self.inner.level()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn prec(&self) -> u64 {
        self.inner.prec()
    }

    fn a<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, self.inner.a(n).map_err(err)?)
    }

    fn coefficient<'py>(&self, py: Python<'py>, t: u64, m: u64) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, self.inner.coefficient(t, m).map_err(err)?)
    }

    fn extract_trace<'py>(&self, py: Python<'py>, t0: u64, p: u64) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &hecke::extract_trace(&self.inner, t0, p).map_err(err)?)
    }

    fn lift<'py>(&self, py: Python<'py>, t: u64, n_max: u64) -> PyResult<Bound<'py, PyList>> {
        let series = shimura::lift_coefficients(&self.inner, t, n_max).map_err(err)?;
        to_fractions(py, series.values())
    }

    /// Eigen-consistency, multiplicativity and generating-function identities.
    fn verify(&self) -> PyResult<bool> {
        let report = suite::verify_form(&self.inner, &suite::VerifyOptions::default()).map_err(err)?;
        Ok(report.passed)
    }

    /// Sign-change reports per prime as a list of dicts.
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (t = 1, mode = "full", p_max = 50, terms = 200, q = None, h = None))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        t: u64,
        mode: &str,
        p_max: u64,
        terms: usize,
        q: Option<u64>,
        h: Option<u64>,
    ) -> PyResult<Bound<'py, PyList>> {
        let mode = match (mode, q, h) {
            ("full", None, None) => ScanMode::Full,
            ("odd", None, None) => ScanMode::Odd,
            ("even", None, None) => ScanMode::Even,
            ("progression", Some(q), Some(h)) => ScanMode::Progression { q, h },
            _ => return Err(PyValueError::new_err(format!("bad scan mode {mode:?}"))),
        };
        let reports = signscan::scan(&self.inner, t, mode, p_max, terms).map_err(err)?;
        let rows = reports
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("p", r.p)?;
                d.set_item("t", r.t)?;
                d.set_item("mode", &r.mode)?;
                d.set_item("length", r.length)?;
                d.set_item("change_count", r.change_count)?;
                d.set_item("first_change_index", r.first_change_index)?;
                d.set_item("zero_count", r.zero_count)?;
                d.set_item("deligne_status", r.deligne_status.as_str())?;
                Ok(d)
            })
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn to_json(&self) -> String {
        forms::form_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Form(level={}, k={}, prec={})", self.inner.level(), self.inner.k(), self.inner.prec())
    }
}

/// Coefficients of `prod eta(d z)^r * theta(z)^theta_power` to `q^prec`.
#[pyfunction]
fn expand_recipe<'py>(
    py: Python<'py>,
    factors: Vec<(u64, i64)>,
    theta_power: u32,
    prec: u64,
) -> PyResult<Bound<'py, PyList>> {
    let recipe = EtaRecipe::new(factors, theta_power).map_err(err)?;
    to_fractions(py, expand(&recipe, prec).map_err(err)?.coeffs())
}

#[pyfunction]
fn kronecker(a: i64, n: i64) -> i8 {
    shimura::kronecker(a, n)
}

#[pyfunction]
fn twisted_sequence<'py>(
    py: Python<'py>,
    a_t: &Bound<'py, PyAny>,
    trace: &Bound<'py, PyAny>,
    chi1_p: i8,
    p: u64,
    k: u32,
    terms: usize,
) -> PyResult<Bound<'py, PyList>> {
    let seq = signscan::twisted_sequence(&from_py(a_t)?, &from_py(trace)?, chi1_p, p, k, terms);
    to_fractions(py, &seq)
}

/// `(change_count, first_change_index, zero_count)` with zeros skipped.
#[pyfunction]
fn count_sign_changes(seq: &Bound<'_, PyAny>) -> PyResult<(usize, Option<usize>, usize)> {
    let c = signscan::count_sign_changes(&from_py_list(seq)?);
    Ok((c.change_count, c.first_change_index, c.zero_count))
}

#[pyfunction]
fn deligne_check(trace: &Bound<'_, PyAny>, p: u64, k: u32) -> PyResult<&'static str> {
    Ok(hecke::deligne_check(&from_py(trace)?, p, k).as_str())
}

/// Coefficients (ascending) of the order-`m_p` remark polynomial.
#[pyfunction]
fn remark_polynomial<'py>(
    py: Python<'py>,
    trace: &Bound<'py, PyAny>,
    p: u64,
    k: u32,
    m_p: usize,
) -> PyResult<Bound<'py, PyList>> {
    let q = genfun::remark_polynomial(&hecke::satake_data(&from_py(trace)?, p, k), m_p);
    to_fractions(py, q.coeffs())
}

/// Distinct real roots of the polynomial with ascending coefficients `coeffs`.
#[pyfunction]
fn real_root_count(coeffs: &Bound<'_, PyAny>) -> PyResult<usize> {
    genfun::real_root_count(&Polynomial::new(from_py_list(coeffs)?)).map_err(err)
}

/// Runs the seeded generating-function identity suite; true when all pass.
#[pyfunction]
#[pyo3(signature = (seed = 7, instances = 100, terms = 100))]
fn genfun_check(seed: u64, instances: usize, terms: usize) -> bool {
    suite::genfun_check(seed, instances, terms).passed
}

#[pymodule(name = "hisign")]
fn hisign_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_function(wrap_pyfunction!(expand_recipe, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(count_sign_changes, m)?)?;
    m.add_function(wrap_pyfunction!(deligne_check, m)?)?;
    m.add_function(wrap_pyfunction!(remark_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(real_root_count, m)?)?;
    m.add_function(wrap_pyfunction!(genfun_check, m)?)?;
    Ok(())
}
