//! Python bindings. Systems, graphs, models and reports cross the boundary as
//! JSON strings in the same schemas the command-line tool reads and writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use monoset::approx::{approx_report, ApproxMode, Bipartition};
use monoset::casestudy::{campaign, generate_instance, CampaignConfig, Strategy};
use monoset::demos::{default_graph, run_demo};
use monoset::error::Error;
use monoset::graphs::Graph;
use monoset::rational::parse_q;
use monoset::setsys::{apply_pipeline, parse_pipeline, SetSystem, Subset};
use monoset::solver::{solve as run_solve, ModelDoc, SolveLimits};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn limits(node_limit: Option<u64>) -> SolveLimits {
    SolveLimits {
        node_limit,
        ..SolveLimits::default()
    }
}

/// Applies a whitespace-separated operator pipeline and returns the system JSON.
#[pyfunction]
fn ops(system_json: &str, pipeline: &str) -> PyResult<String> {
    let s = SetSystem::from_json(system_json).map_err(py_err)?;
    let ops = parse_pipeline(pipeline, s.ground()).map_err(py_err)?;
    Ok(apply_pipeline(&s, &ops).map_err(py_err)?.to_json())
}

/// Approximation report JSON; `mode` is upper, lower, interval or bimonotone.
#[pyfunction]
#[pyo3(signature = (system_json, mode, split=None))]
fn approx(system_json: &str, mode: &str, split: Option<Vec<usize>>) -> PyResult<String> {
    let s = SetSystem::from_json(system_json).map_err(py_err)?;
    let mode = match (mode, split) {
        ("upper", None) => ApproxMode::Upper,
        ("lower", None) => ApproxMode::Lower,
        ("interval", None) => ApproxMode::Interval,
        ("bimonotone", Some(labels)) => {
            let part_i = Subset::from_one_based(&labels, s.ground()).map_err(py_err)?;
            ApproxMode::Bimonotone(Bipartition::from_i(s.ground(), part_i).map_err(py_err)?)
        }
        ("bimonotone", None) => return Err(PyValueError::new_err("bimonotone mode needs a split")),
        (m @ ("upper" | "lower" | "interval"), Some(_)) => {
            return Err(PyValueError::new_err(format!("mode {m} takes no split")))
        }
        (other, _) => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    Ok(approx_report(&s, mode).map_err(py_err)?.to_json())
}

/// Runs a demo and returns `(table, all_equal)`.
#[pyfunction]
#[pyo3(signature = (name, graph_json=None))]
fn demo(name: &str, graph_json: Option<&str>) -> PyResult<(String, bool)> {
    let g = match graph_json {
        Some(text) => Graph::from_json(text).map_err(py_err)?,
        None => default_graph(name),
    };
    let report = run_demo(name, &g).map_err(py_err)?;
    Ok((report.to_string(), report.all_equal()))
}

/// Solves a model document and returns the report JSON.
#[pyfunction]
#[pyo3(signature = (model_json, node_limit=None))]
fn solve(py: Python<'_>, model_json: &str, node_limit: Option<u64>) -> PyResult<String> {
    let doc: ModelDoc = serde_json::from_str(model_json).map_err(|e| py_err(e.into()))?;
    let model = doc.to_model().map_err(py_err)?;
    let report = py.detach(|| run_solve(&model, limits(node_limit))).map_err(py_err)?;
    Ok(report.to_json())
}

/// Generates one case-study instance and returns its JSON.
#[pyfunction]
fn instance(n: usize, density: f64, eps: &str, k: usize, seed: u64) -> PyResult<String> {
    let epsilon = parse_q(eps).map_err(py_err)?;
    Ok(generate_instance(n, density, epsilon, k, seed)
        .map_err(py_err)?
        .to_json())
}

/// Runs the four strategies (or the named ones) on every seed of one
/// configuration and returns the campaign CSV.
#[pyfunction]
#[pyo3(signature = (n, density, eps, k, seeds, strategies=None, node_limit=None))]
#[allow(clippy::too_many_arguments)]
fn casestudy(
    py: Python<'_>,
    n: usize,
    density: f64,
    eps: &str,
    k: usize,
    seeds: Vec<u64>,
    strategies: Option<Vec<String>>,
    node_limit: Option<u64>,
) -> PyResult<String> {
    let epsilon = parse_q(eps).map_err(py_err)?;
    let strategies = match strategies {
        Some(names) => names
            .iter()
            .map(|s| Strategy::parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?,
        None => Strategy::ALL.to_vec(),
    };
    let config = CampaignConfig { n, density, epsilon, k };
    let report = py
        .detach(|| campaign(&[config], &seeds, &strategies, limits(node_limit)))
        .map_err(py_err)?;
    report.to_csv().map_err(py_err)
}

#[pymodule]
fn pymonoset(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(ops, m)?)?;
    m.add_function(wrap_pyfunction!(approx, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(instance, m)?)?;
    m.add_function(wrap_pyfunction!(casestudy, m)?)?;
    Ok(())
}
