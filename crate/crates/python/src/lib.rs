//! Python bindings: groups are passed as a degree plus generator image lists,
//! reports come back as plain dicts.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use subkit_core::corpus::{load_corpus, shipped_corpus_paths};
use subkit_core::group::{sylow_subgroup, Budget};
use subkit_core::report::CheckReport;
use subkit_core::subnormal::{self, subnormal_subgroups as core_subnormal};
use subkit_core::suite::{run_suite_with, verify_identity as core_verify, SuiteOptions, CHECKS};
use subkit_core::{Group, Permutation, Subgroup, SubkitError};

fn err(e: SubkitError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn build(degree: usize, gens: Vec<Vec<u32>>) -> PyResult<Arc<Group>> {
    let perms = gens
        .into_iter()
        .map(Permutation::new)
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Group::generate(degree, perms, &Budget::from_env())
        .map(Arc::new)
        .map_err(err)
}

fn gens_of(h: &Subgroup) -> Vec<Vec<u32>> {
    h.gen_perms().iter().map(|p| p.images().to_vec()).collect()
}

fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = py
        .import("json")?
        .call_method1("dumps", (obj,))?
        .extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Goes through the JSON line so the dict keeps the report's key order.
fn report_to_py<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (r.to_json_line(),))
}

fn reports_to_py<'py>(
    py: Python<'py>,
    reports: &[CheckReport],
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    reports.iter().map(|r| report_to_py(py, r)).collect()
}

/// Order of the group generated by `generators` on `degree` points.
#[pyfunction]
fn order(degree: usize, generators: Vec<Vec<u32>>) -> PyResult<usize> {
    Ok(build(degree, generators)?.order())
}

/// Generators of the canonical Sylow `p`-subgroup.
#[pyfunction]
fn sylow(degree: usize, generators: Vec<Vec<u32>>, p: usize) -> PyResult<Vec<Vec<u32>>> {
    let g = build(degree, generators)?;
    Ok(gens_of(&sylow_subgroup(&g.as_subgroup(), p)))
}

/// Generators of every subnormal subgroup, in canonical order.
#[pyfunction]
fn subnormal_subgroups(degree: usize, generators: Vec<Vec<u32>>) -> PyResult<Vec<Vec<Vec<u32>>>> {
    let g = build(degree, generators)?;
    let subs = core_subnormal(&g.as_subgroup(), &Budget::from_env()).map_err(err)?;
    Ok(subs.iter().map(gens_of).collect())
}

#[pyfunction]
fn is_subnormal(
    degree: usize,
    generators: Vec<Vec<u32>>,
    subgroup: Vec<Vec<u32>>,
) -> PyResult<bool> {
    let g = build(degree, generators)?;
    let perms = subgroup
        .into_iter()
        .map(Permutation::new)
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let h = Subgroup::from_perms(&g, &perms).map_err(err)?;
    Ok(subnormal::is_subnormal(&g.as_subgroup(), &h))
}

/// Runs checks over group files (the shipped corpus when `paths` is empty).
#[pyfunction]
#[pyo3(signature = (paths=Vec::new(), checks=None, prime=None))]
fn verify<'py>(
    py: Python<'py>,
    paths: Vec<String>,
    checks: Option<Vec<String>>,
    prime: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let paths: Vec<std::path::PathBuf> = if paths.is_empty() {
        shipped_corpus_paths()
    } else {
        paths.into_iter().map(Into::into).collect()
    };
    let corpus = load_corpus(&paths).map_err(err)?;
    let checks: Vec<String> =
        checks.unwrap_or_else(|| CHECKS.iter().map(|c| c.to_string()).collect());
    let names: Vec<&str> = checks.iter().map(String::as_str).collect();
    let opts = SuiteOptions {
        prime,
        timing: false,
    };
    let reports = run_suite_with(&corpus, &names, &opts).map_err(err)?;
    reports_to_py(py, &reports)
}

/// One identity on one instance of a group file.
#[pyfunction]
fn verify_identity<'py>(
    py: Python<'py>,
    path: String,
    prime: usize,
    kind: &str,
    instance: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut corpus = load_corpus(&[path]).map_err(err)?;
    let entry = corpus
        .pop()
        .ok_or_else(|| PyValueError::new_err("empty group file"))?;
    let inst = from_py(py, instance)?;
    let report = core_verify(&entry, prime, kind, &inst).map_err(err)?;
    report_to_py(py, &report)
}

#[pyfunction]
fn example_e1(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyAny>>> {
    let reports = subkit_core::scenario::scenario_example_e1().map_err(err)?;
    reports_to_py(py, &reports)
}

#[pymodule]
fn subkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(order, m)?)?;
    m.add_function(wrap_pyfunction!(sylow, m)?)?;
    m.add_function(wrap_pyfunction!(subnormal_subgroups, m)?)?;
    m.add_function(wrap_pyfunction!(is_subnormal, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(example_e1, m)?)?;
    m.add("CHECKS", CHECKS.to_vec())?;
    Ok(())
}
