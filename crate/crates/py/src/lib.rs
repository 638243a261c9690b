use std::path::PathBuf;
use std::time::Duration;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use borsuk_core::coloring::{encode_coloring, is_colorable, ColoringOutcome};
use borsuk_core::cover::build_cover_10_4;
use borsuk_core::search::run_case;
use borsuk_core::{cube, graph, iso};
use borsuk_core::{
    CaseSpec, DistanceGraph, Error, ForbiddenFamily, NamedConfig, RunOptions, SatSolver,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidVertex(_)
        | Error::Parse { .. }
        | Error::UnknownTag(_)
        | Error::UnknownRow(_)
        | Error::DimensionMismatch(..)
        | Error::DimensionOutOfRange(_)
        | Error::DistanceOutOfRange { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// A set of cube vertices, given as bitstrings (leftmost character is
/// coordinate 1).
#[pyclass(name = "VertexSet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyVertexSet(borsuk_core::VertexSet);

#[pymethods]
impl PyVertexSet {
    #[new]
    fn new(bitstrings: Vec<String>) -> PyResult<Self> {
        if bitstrings.is_empty() {
            return Err(PyValueError::new_err(
                "use VertexSet.empty(dim) for an empty set",
            ));
        }
        borsuk_core::VertexSet::parse_bitstrings(&bitstrings)
            .map(PyVertexSet)
            .map_err(to_py)
    }

    #[staticmethod]
    fn empty(dim: usize) -> PyResult<Self> {
        borsuk_core::VertexSet::empty(dim)
            .map(PyVertexSet)
            .map_err(to_py)
    }

    #[staticmethod]
    fn cube(dim: usize) -> PyResult<Self> {
        borsuk_core::VertexSet::cube(dim)
            .map(PyVertexSet)
            .map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> u8 {
        self.0.dim()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, bitstring: &str) -> PyResult<bool> {
        let v: cube::Vertex = bitstring.parse().map_err(to_py)?;
        Ok(v.dim() == self.0.dim() && self.0.contains(v))
    }

    fn __eq__(&self, other: &PyVertexSet) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("VertexSet(dim={}, len={})", self.0.dim(), self.0.len())
    }

    fn bitstrings(&self) -> Vec<String> {
        self.0.to_bitstrings()
    }

    fn diameter(&self) -> u32 {
        self.0.diameter()
    }

    fn union(&self, other: &PyVertexSet) -> PyResult<Self> {
        self.0.union(&other.0).map(PyVertexSet).map_err(to_py)
    }

    fn canonical_form(&self) -> Self {
        PyVertexSet(iso::canonical_form(&self.0))
    }

    /// Some isometric image of `pattern` lies inside this set.
    fn contains_copy_of(&self, pattern: &PyVertexSet) -> PyResult<bool> {
        iso::isometric_contains(&self.0, &pattern.0).map_err(to_py)
    }
}

/// A cube symmetry `x -> perm(x) xor translation`.
#[pyclass(name = "Isometry", frozen)]
struct PyIsometry(cube::Isometry);

#[pymethods]
impl PyIsometry {
    /// `perm[i]` is the coordinate that coordinate `i` (0-based) moves to.
    #[new]
    fn new(perm: Vec<u8>, translation: &str) -> PyResult<Self> {
        let t = cube::parse_mask(translation).map_err(to_py)?;
        cube::Isometry::new(perm, t).map(PyIsometry).map_err(to_py)
    }

    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        cube::Isometry::random(dim, &mut rng)
            .map(PyIsometry)
            .map_err(to_py)
    }

    fn apply(&self, set: &PyVertexSet) -> PyResult<PyVertexSet> {
        self.0.apply_set(&set.0).map(PyVertexSet).map_err(to_py)
    }

    fn compose(&self, other: &PyIsometry) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyIsometry).map_err(to_py)
    }
}

#[pyfunction]
fn distance(a: &str, b: &str) -> PyResult<u32> {
    let (a, b): (cube::Vertex, cube::Vertex) =
        (a.parse().map_err(to_py)?, b.parse().map_err(to_py)?);
    cube::hamming_distance(a, b).map_err(to_py)
}

#[pyfunction]
fn group_order(n: usize) -> PyResult<u64> {
    cube::group_order(n).map_err(to_py)
}

#[pyfunction]
fn trim(n: usize, k: u8, seeds: &PyVertexSet) -> PyResult<PyVertexSet> {
    graph::trim(n, k, &seeds.0).map(PyVertexSet).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, seeds, forbid = Vec::new()))]
fn trim2(k: u8, seeds: &PyVertexSet, forbid: Vec<String>) -> PyResult<PyVertexSet> {
    let tags = forbid
        .iter()
        .map(|t| t.parse::<NamedConfig>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    let domain = borsuk_core::VertexSet::cube(seeds.0.dim() as usize).map_err(to_py)?;
    graph::trim2(&domain, k, &seeds.0, &ForbiddenFamily::named(tags))
        .map(PyVertexSet)
        .map_err(to_py)
}

/// Representative point set of a named configuration such as `"K4'"`.
#[pyfunction]
fn representative(tag: &str) -> PyResult<PyVertexSet> {
    let tag: NamedConfig = tag.parse().map_err(to_py)?;
    Ok(PyVertexSet(tag.representative()))
}

/// The three `(10, 4)` cover sets as `(label, set)` pairs.
#[pyfunction]
fn cover_10_4() -> PyResult<Vec<(String, PyVertexSet)>> {
    let system = build_cover_10_4().map_err(to_py)?;
    Ok(system
        .labels
        .into_iter()
        .zip(system.sets.into_iter().map(PyVertexSet))
        .collect())
}

/// DIMACS text of the `colors`-coloring instance for `G(set; k)`.
#[pyfunction]
fn coloring_dimacs(set: &PyVertexSet, k: u8, colors: usize) -> PyResult<String> {
    if colors == 0 {
        return Err(PyValueError::new_err("colors must be positive"));
    }
    let g = DistanceGraph::build(&set.0, k).map_err(to_py)?;
    Ok(encode_coloring(g.graph(), colors).to_dimacs())
}

/// Returns `(outcome, colors)`; `colors` is the per-vertex color list in
/// set order when the outcome is `"colored"`.
#[pyfunction]
#[pyo3(signature = (set, k, colors, timeout_ms = 1000, solver = None))]
fn color(
    set: &PyVertexSet,
    k: u8,
    colors: usize,
    timeout_ms: u64,
    solver: Option<PathBuf>,
) -> PyResult<(String, Option<Vec<u32>>)> {
    let g = DistanceGraph::build(&set.0, k).map_err(to_py)?;
    let solver = solver.map(SatSolver::new);
    let outcome = is_colorable(
        g.graph(),
        colors,
        Duration::from_millis(timeout_ms),
        solver.as_ref(),
    )
    .map_err(to_py)?;
    let assignment = match &outcome {
        ColoringOutcome::Colored(a) => Some(a.colors().to_vec()),
        _ => None,
    };
    Ok((outcome.label().to_string(), assignment))
}

/// Runs a case-table row and returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (row, leaf_budget = None, count_only = false, solver = None))]
fn case(
    row: u8,
    leaf_budget: Option<u64>,
    count_only: bool,
    solver: Option<PathBuf>,
) -> PyResult<String> {
    let mut spec = CaseSpec::table_row(row).map_err(to_py)?;
    spec.leaf_budget = leaf_budget;
    let options = RunOptions {
        solver: solver.map(SatSolver::new),
        count_only,
        jobs: 1,
        ..Default::default()
    };
    let report = run_case(&spec, &options).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn borsuk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVertexSet>()?;
    m.add_class::<PyIsometry>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(group_order, m)?)?;
    m.add_function(wrap_pyfunction!(trim, m)?)?;
    m.add_function(wrap_pyfunction!(trim2, m)?)?;
    m.add_function(wrap_pyfunction!(representative, m)?)?;
    m.add_function(wrap_pyfunction!(cover_10_4, m)?)?;
    m.add_function(wrap_pyfunction!(coloring_dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(color, m)?)?;
    m.add_function(wrap_pyfunction!(case, m)?)?;
    Ok(())
}
