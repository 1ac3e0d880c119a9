//! Python bindings. Graphs are passed as DSL expressions.

use maghom_core::chain::{chain_rank_table, Metric};
use maghom_core::dsl::parse_graph;
use maghom_core::graph::{Graph, Vertex};
use maghom_core::homology::{
    compute_homology, magnitude_by_counting, magnitude_by_euler, magnitude_by_inverse_series,
    HomologyOptions, RankMethod,
};
use maghom_core::verify::{self, CheckReport};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn graph(expr: &str) -> PyResult<Graph> {
    parse_graph(expr).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn method(name: &str) -> PyResult<RankMethod> {
    name.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown rank method `{name}`")))
}

fn runtime(e: impl ToString) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Vertex count and edge list of a graph expression.
#[pyfunction]
fn parse(expr: &str) -> PyResult<(usize, Vec<(Vertex, Vertex)>)> {
    let g = graph(expr)?;
    Ok((g.n(), g.edges().collect()))
}

/// Homology cells as dicts with keys `k`, `l`, `rank`, `torsion`, `method`.
/// Cells beyond the trail budget have `rank` set to `None`.
#[pyfunction]
#[pyo3(signature = (expr, lmax=6, torsion=false, method="auto", max_trails=HomologyOptions::DEFAULT_MAX_TRAILS))]
fn homology<'py>(
    py: Python<'py>,
    expr: &str,
    lmax: usize,
    torsion: bool,
    method: &str,
    max_trails: u128,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = graph(expr)?;
    let opts = HomologyOptions {
        torsion,
        method: self::method(method)?,
        max_trails,
        ..Default::default()
    };
    let h = py
        .allow_threads(|| compute_homology(&g, lmax, &opts))
        .map_err(runtime)?;
    h.cells()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("k", c.k)?;
            d.set_item("l", c.l)?;
            d.set_item("rank", c.rank)?;
            d.set_item("torsion", c.torsion.factors().map(<[u64]>::to_vec))?;
            d.set_item("method", c.method.map(|m| m.as_str()))?;
            Ok(d)
        })
        .collect()
}

/// `counts[l][k]`, the number of generators of each chain group.
#[pyfunction]
#[pyo3(signature = (expr, lmax=6))]
fn chains(expr: &str, lmax: usize) -> PyResult<Vec<Vec<u128>>> {
    let g = graph(expr)?;
    Ok(chain_rank_table(&Metric::new(&g), lmax).counts)
}

/// Magnitude coefficients by `counting`, `inverse` or `euler`.
#[pyfunction]
#[pyo3(signature = (expr, lmax=6, method="counting"))]
fn magnitude(py: Python<'_>, expr: &str, lmax: usize, method: &str) -> PyResult<Vec<i128>> {
    let g = graph(expr)?;
    let series = py.allow_threads(|| match method {
        "counting" => Ok(Ok(magnitude_by_counting(&g, lmax))),
        "inverse" => Ok(magnitude_by_inverse_series(&g, lmax)),
        "euler" => Ok(compute_homology(&g, lmax, &HomologyOptions::default())
            .and_then(|h| magnitude_by_euler(&h))),
        other => Err(other.to_string()),
    });
    let series = series
        .map_err(|m| PyValueError::new_err(format!("unknown magnitude method `{m}`")))?
        .map_err(runtime)?;
    Ok(series.coeffs().to_vec())
}

fn run_check(check: &str, graphs: &[Graph], lmax: usize) -> PyResult<CheckReport> {
    let opts = verify::check_options();
    let arity = match check {
        "diagonal" | "tree" | "support-bounds" => 1,
        "disjoint" | "kunneth" | "join-diagonal" => 2,
        _ => return Err(PyValueError::new_err(format!("unknown check `{check}`"))),
    };
    if graphs.len() != arity {
        return Err(PyValueError::new_err(format!(
            "`{check}` takes {arity} graph(s), got {}",
            graphs.len()
        )));
    }
    let report = match check {
        "diagonal" => verify::check_diagonal(&graphs[0], lmax, &opts),
        "tree" => verify::check_tree_formula(&graphs[0], lmax, &opts),
        "support-bounds" => verify::check_support_bounds(&graphs[0], lmax, &opts),
        "disjoint" => verify::check_disjoint_additivity(&graphs[0], &graphs[1], lmax, &opts),
        "kunneth" => verify::check_kunneth(&graphs[0], &graphs[1], lmax, &opts),
        _ => verify::check_join_diagonal(&graphs[0], &graphs[1], lmax, &opts),
    };
    report.map_err(runtime)
}

/// Runs a check and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (check, graphs, lmax=4))]
fn check<'py>(
    py: Python<'py>,
    check: &str,
    graphs: Vec<String>,
    lmax: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let parsed = graphs.iter().map(|e| graph(e)).collect::<PyResult<Vec<_>>>()?;
    let report = py.allow_threads(|| run_check(check, &parsed, lmax))?;
    let text = serde_json::to_string(&report.with_graphs(graphs)).map_err(runtime)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pymodule]
fn maghom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_MAX_TRAILS", HomologyOptions::DEFAULT_MAX_TRAILS)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(chains, m)?)?;
    m.add_function(wrap_pyfunction!(magnitude, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
