//! Python module `geodetic_py`: the graph type, the exact solvers, and
//! the reduction pipeline, with core errors surfacing as ValueError.

use geodetic_core::convexity;
use geodetic_core::graph::Graph;
use geodetic_core::instances::{
    gen_no_3dm, gen_planted_3dm, solve_3dm_bruteforce, solve_sat_bruteforce, E3p3Formula,
    ThreeDmInstance,
};
use geodetic_core::io::{parse_graph_file, write_graph_file};
use geodetic_core::reductions::{
    assert_construction, discrimination_check, forward_witness, pendant_cover_check,
    reduce_3dm_to_geodetic, reduce_e3p3sat_to_vc, search_strategy, simulate,
    structured_decision, AuditReport, Ratio, ReducedInstance, ReductionParams, DEFAULT_EPSILON,
    REVERSE_DIRECTION_NOTE,
};
use geodetic_core::smd;
use geodetic_core::solver;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::fmt::Display;
use std::str::FromStr;

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Simple undirected graph with u32 vertex ids.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: usize) -> Self {
        PyGraph { inner: Graph::with_vertices(vertices) }
    }

    fn add_vertex(&mut self) -> u32 {
        self.inner.add_vertex()
    }

    fn add_edge(&mut self, u: u32, v: u32) -> PyResult<()> {
        self.inner.add_edge(u, v).map_err(err)
    }

    /// Connects u and v through `len - 1` fresh vertices; returns them.
    fn add_path(&mut self, u: u32, v: u32, len: u64) -> PyResult<Vec<u32>> {
        self.inner.add_path(u, v, len).map_err(err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn neighbors(&self, v: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.neighbors(v).map_err(err)?.to_vec())
    }

    fn degree(&self, v: u32) -> PyResult<usize> {
        self.inner.degree(v).map_err(err)
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.inner.has_edge(u, v)
    }

    fn pendants(&self) -> Vec<u32> {
        self.inner.pendant_vertices()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_forest(&self) -> bool {
        self.inner.is_forest()
    }

    fn distance(&self, u: u32, v: u32) -> PyResult<Option<u32>> {
        Ok(self.inner.bfs_distances(u).map_err(err)?.get(v))
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
fn interval(g: &PyGraph, u: u32, v: u32) -> PyResult<Vec<u32>> {
    Ok(convexity::interval(&g.inner, u, v).map_err(err)?.iter().collect())
}

#[pyfunction]
fn interval_of_set(g: &PyGraph, s: Vec<u32>) -> PyResult<Vec<u32>> {
    Ok(convexity::interval_of_set(&g.inner, &s).map_err(err)?.iter().collect())
}

/// (is_geodetic, uncovered vertices)
#[pyfunction]
fn is_geodetic(g: &PyGraph, s: Vec<u32>) -> PyResult<(bool, Vec<u32>)> {
    let check = convexity::is_geodetic(&g.inner, &s).map_err(err)?;
    Ok((check.is_geodetic, check.uncovered))
}

#[pyfunction]
fn min_geodetic(g: &PyGraph) -> PyResult<Vec<u32>> {
    solver::min_geodetic(&g.inner).map_err(err)
}

#[pyfunction]
fn decide_geodetic(g: &PyGraph, k: usize) -> PyResult<Option<Vec<u32>>> {
    solver::decide_geodetic(&g.inner, k).map_err(err)
}

/// (dimension, one minimum strong resolving set)
#[pyfunction]
fn strong_metric_dimension(g: &PyGraph) -> PyResult<(usize, Vec<u32>)> {
    smd::strong_metric_dimension(&g.inner).map_err(err)
}

#[pyfunction]
fn mmd_pairs(g: &PyGraph) -> PyResult<Vec<(u32, u32)>> {
    smd::mmd_pairs(&g.inner).map_err(err)
}

#[pyfunction]
fn strong_resolving_graph(g: &PyGraph) -> PyResult<PyGraph> {
    Ok(PyGraph { inner: smd::strong_resolving_graph(&g.inner).map_err(err)? })
}

#[pyfunction]
fn min_vertex_cover(g: &PyGraph) -> PyResult<Vec<u32>> {
    smd::min_vertex_cover(&g.inner).map_err(err)
}

#[pyfunction]
fn solve_3dm(n: u32, sets: Vec<[u32; 3]>) -> PyResult<Option<Vec<u32>>> {
    let inst = ThreeDmInstance::new(n, sets).map_err(err)?;
    solve_3dm_bruteforce(&inst).map_err(err)
}

#[pyfunction]
fn planted_3dm(n: u32, m: usize, seed: u64) -> PyResult<Vec<[u32; 3]>> {
    Ok(gen_planted_3dm(n, m, seed).map_err(err)?.sets().to_vec())
}

#[pyfunction]
fn no_3dm(n: u32, seed: u64) -> PyResult<Vec<[u32; 3]>> {
    Ok(gen_no_3dm(n, seed).map_err(err)?.sets().to_vec())
}

/// None, or the satisfying assignment as three bool lists.
#[pyfunction]
fn solve_e3p3(n: u32, clauses: Vec<[i32; 3]>) -> PyResult<Option<(Vec<bool>, Vec<bool>, Vec<bool>)>> {
    let f = E3p3Formula::new(n, clauses).map_err(err)?;
    let asg = solve_sat_bruteforce(&f).map_err(err)?;
    Ok(asg.map(|a| (a.alpha, a.beta, a.gamma)))
}

/// (cover-question graph, budget 3n + 2m)
#[pyfunction]
fn reduce_e3p3_to_vc(n: u32, clauses: Vec<[i32; 3]>) -> PyResult<(PyGraph, u64)> {
    let f = E3p3Formula::new(n, clauses).map_err(err)?;
    let red = reduce_e3p3sat_to_vc(&f).map_err(err)?;
    Ok((PyGraph { inner: red.graph }, red.k))
}

fn report_rows(rep: &AuditReport) -> Vec<(String, bool, String)> {
    rep.checks
        .iter()
        .map(|c| (c.name.to_string(), c.pass, c.detail.clone()))
        .collect()
}

/// A matching family reduced to a geodetic-set question.
#[pyclass(name = "Reduction")]
struct PyReduction {
    inner: ReducedInstance,
}

#[pymethods]
impl PyReduction {
    /// Builds from a family of triples over [1, n] per part. Omitting
    /// `scale` picks the strict-mode minimum for the width.
    #[staticmethod]
    #[pyo3(signature = (n, sets, scale=None, epsilon=None))]
    fn build(n: u32, sets: Vec<[u32; 3]>, scale: Option<u64>, epsilon: Option<&str>) -> PyResult<Self> {
        let src = ThreeDmInstance::new(n, sets).map_err(err)?;
        let eps = match epsilon {
            Some(text) => Ratio::from_str(text).map_err(err)?,
            None => DEFAULT_EPSILON,
        };
        let params = match scale {
            Some(v) => ReductionParams { scale: v, epsilon: eps, strict: false },
            None => ReductionParams::strict_auto(n, eps),
        };
        let inner = reduce_3dm_to_geodetic(&src, &params).map_err(err)?;
        Ok(PyReduction { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let file = parse_graph_file(text).map_err(err)?;
        Ok(PyReduction { inner: ReducedInstance::from_graph_file(&file).map_err(err)? })
    }

    fn to_text(&self) -> String {
        write_graph_file(&self.inner.to_graph_file())
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k
    }

    #[getter]
    fn scale(&self) -> u64 {
        self.inner.params.scale
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.graph.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.graph.edge_count()
    }

    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph.clone() }
    }

    fn pendants(&self) -> Vec<u32> {
        self.inner.graph.pendant_vertices()
    }

    /// Structural audit rows as (name, pass, detail).
    fn audit(&self) -> Vec<(String, bool, String)> {
        report_rows(&assert_construction(&self.inner))
    }

    fn pendant_cover(&self) -> PyResult<Vec<(String, bool, String)>> {
        Ok(report_rows(&pendant_cover_check(&self.inner).map_err(err)?))
    }

    fn discrimination(&self) -> PyResult<Vec<(String, bool, String)>> {
        Ok(report_rows(&discrimination_check(&self.inner).map_err(err)?))
    }

    /// Geodetic witness for a chosen exact cover (1-based set indices).
    fn witness(&self, chosen: Vec<u32>) -> PyResult<Vec<u32>> {
        forward_witness(&self.inner, &chosen).map_err(err)
    }

    /// Decides the embedded family with the matching oracle; a yes comes
    /// back as the forward witness.
    fn decide(&self) -> PyResult<Option<Vec<u32>>> {
        structured_decision(&self.inner).map_err(err)
    }

    /// Runs the searcher choreography:
    /// (all_cleared, max_searchers, recontaminations, ops_applied).
    fn search(&self) -> PyResult<(bool, u32, u64, usize)> {
        let outcome = simulate(&self.inner.graph, &search_strategy(&self.inner)).map_err(err)?;
        Ok((
            outcome.all_cleared,
            outcome.max_searchers,
            outcome.recontaminations,
            outcome.ops_applied,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Reduction(n={}, m={}, scale={}, vertices={}, k={})",
            self.inner.source.n(),
            self.inner.source.m(),
            self.inner.params.scale,
            self.inner.graph.vertex_count(),
            self.inner.k
        )
    }
}

#[pymodule]
fn geodetic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReduction>()?;
    m.add_function(wrap_pyfunction!(interval, m)?)?;
    m.add_function(wrap_pyfunction!(interval_of_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_geodetic, m)?)?;
    m.add_function(wrap_pyfunction!(min_geodetic, m)?)?;
    m.add_function(wrap_pyfunction!(decide_geodetic, m)?)?;
    m.add_function(wrap_pyfunction!(strong_metric_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(mmd_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(strong_resolving_graph, m)?)?;
    m.add_function(wrap_pyfunction!(min_vertex_cover, m)?)?;
    m.add_function(wrap_pyfunction!(solve_3dm, m)?)?;
    m.add_function(wrap_pyfunction!(planted_3dm, m)?)?;
    m.add_function(wrap_pyfunction!(no_3dm, m)?)?;
    m.add_function(wrap_pyfunction!(solve_e3p3, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_e3p3_to_vc, m)?)?;
    m.add("REVERSE_DIRECTION_NOTE", REVERSE_DIRECTION_NOTE)?;
    Ok(())
}
