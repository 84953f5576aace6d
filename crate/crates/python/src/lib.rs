//! Python bindings. Logs of eigenvalues are returned as floats; records
//! come back as plain dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use prolate::approx;
use prolate::oracle::{self, LambdaOracle};
use prolate::repro::{self, ReproId, ReproOptions};
use prolate::special;
use prolate::{Error, SpectralPoint, Tier};

fn err(e: Error) -> PyErr {
    if e.is_domain() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn point(n: usize, c: f64) -> PyResult<SpectralPoint> {
    SpectralPoint::new(n, c).map_err(err)
}

/// Serialises through JSON so nested records arrive as dicts and lists.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_tier(name: &str) -> PyResult<Tier> {
    match name {
        "nystrom" => Ok(Tier::Nystrom),
        "ratio" => Ok(Tier::Ratio),
        "integral" => Ok(Tier::Integral),
        _ => Err(PyValueError::new_err(format!(
            "unknown tier {name:?}; expected nystrom, ratio or integral"
        ))),
    }
}

/// `ln λ_n(c)` with its tier and error estimate; `tier=None` picks one.
#[pyfunction]
#[pyo3(signature = (n, c, tier=None))]
fn log_lambda<'py>(
    py: Python<'py>,
    n: usize,
    c: f64,
    tier: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point(n, c)?;
    let tier = tier.map(parse_tier).transpose()?;
    let value = py
        .detach(|| match tier {
            None => oracle::lambda_best(p),
            Some(t) => LambdaOracle::new(c).and_then(|o| o.tier(n, t)),
        })
        .map_err(err)?;
    to_py(py, &value)
}

#[pyfunction]
fn log_lambda_tilde(n: usize, c: f64) -> PyResult<f64> {
    approx::lambda_tilde(point(n, c)?).map_err(err)
}

#[pyfunction]
fn log_lambda_hat(n: usize, c: f64) -> PyResult<f64> {
    approx::lambda_hat(point(n, c)?).map_err(err)
}

#[pyfunction]
fn log_lambda_widom(n: usize, c: f64) -> PyResult<f64> {
    Ok(approx::lambda_widom(point(n, c)?))
}

#[pyfunction]
fn sqrt_q_tilde(n: usize, c: f64) -> PyResult<f64> {
    approx::sqrt_q_tilde(point(n, c)?).map_err(err)
}

/// Every closed-form quantity at `(n, c)`; undefined ones are `None`.
#[pyfunction]
fn approx_bundle<'py>(py: Python<'py>, n: usize, c: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &approx::approx_bundle(point(n, c)?).map_err(err)?)
}

/// Galerkin eigenpair: `chi`, `sqrt_q`, `psi_at_1` and Legendre coefficients.
#[pyfunction]
fn prolate_solve<'py>(py: Python<'py>, n: usize, c: f64) -> PyResult<Bound<'py, PyAny>> {
    let p = oracle::prolate_solve(point(n, c)?).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("chi", p.chi)?;
    d.set_item("sqrt_q", p.sqrt_q())?;
    d.set_item("psi_at_1", p.psi_at_1)?;
    d.set_item("kappa", p.kappa_measure())?;
    d.set_item("beta", p.beta.clone())?;
    Ok(d.into_any())
}

/// Bandwidth at which `λ_n = ½`.
#[pyfunction]
fn c_star(py: Python<'_>, n: usize) -> PyResult<f64> {
    py.detach(|| oracle::c_star(n)).map_err(err)
}

#[pyfunction]
fn j_integral(x: f64) -> PyResult<f64> {
    special::j_integral(x).map(|j| j.value).map_err(err)
}

#[pyfunction]
fn phi_inverse(x: f64) -> PyResult<f64> {
    special::phi_inverse(x).map(|k| k.value()).map_err(err)
}

#[pyfunction]
fn delta_kappa(kappa: f64) -> PyResult<f64> {
    approx::delta_kappa(kappa).map_err(err)
}

/// Reference table 1, 2 or 3 as a report dict.
#[pyfunction]
#[pyo3(signature = (id, oracle_max_c=1000.0))]
fn run_table<'py>(py: Python<'py>, id: u8, oracle_max_c: f64) -> PyResult<Bound<'py, PyAny>> {
    let id = match id {
        1 => ReproId::Table1,
        2 => ReproId::Table2,
        3 => ReproId::Table3,
        _ => return Err(PyValueError::new_err("table id must be 1, 2 or 3")),
    };
    let options = ReproOptions {
        oracle_max_c,
        ..ReproOptions::default()
    };
    let report = py.detach(|| repro::run_table(id, &options)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pyprolate(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(log_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(log_lambda_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(log_lambda_hat, m)?)?;
    m.add_function(wrap_pyfunction!(log_lambda_widom, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_q_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(approx_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(prolate_solve, m)?)?;
    m.add_function(wrap_pyfunction!(c_star, m)?)?;
    m.add_function(wrap_pyfunction!(j_integral, m)?)?;
    m.add_function(wrap_pyfunction!(phi_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(delta_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(run_table, m)?)?;
    Ok(())
}
