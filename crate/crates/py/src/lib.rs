//! Python bindings: the `pyorbital` extension module.

use orbital_core::chains::{
    estimate_rho as rho_of, fugacity_threshold, GibbsKernel, InsertDeleteKernel, Kernel, LambdaBound, OrbitSampling,
    OrbitalKernel, TransitionMatrix,
};
use orbital_core::eval::{exact_mixing_time, orbit_seed, tv_distance as tv};
use orbital_core::models::{ClauseModel, ExactDistribution, IndependentSetModel, Target};
use orbital_core::perm::{cube_orbit_sizes, EnumeratedGroup, PermGroup, Permutation, PointNames, State, ELEMENT_GUARD};
use orbital_core::symmetry::{
    automorphism_search, build_colored_graph, graph_to_colored, orbit_report, restrict_to_variables, WeightedClauseSet,
};
use orbital_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Guard { .. } | Error::NotConverged(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_state(text: &str) -> PyResult<State> {
    State::parse(text).map_err(py_err)
}

/// Undirected simple graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "pyorbital", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: orbital_core::models::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = orbital_core::models::Graph::from_edges(n, edges).map_err(py_err)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn grid(k: usize) -> Self {
        PyGraph {
            inner: orbital_core::models::Graph::grid(k),
        }
    }

    #[staticmethod]
    fn connected_cliques(k: usize) -> PyResult<Self> {
        if k < 2 {
            return Err(PyValueError::new_err("connected cliques need k >= 2"));
        }
        Ok(PyGraph {
            inner: orbital_core::models::Graph::connected_cliques(k),
        })
    }

    #[staticmethod]
    fn complete_model(k: usize) -> Self {
        PyGraph {
            inner: orbital_core::models::Graph::complete_model(k),
        }
    }

    /// Parses `p edge n m` text with 1-based vertices.
    #[staticmethod]
    fn parse_dimacs(text: &str) -> PyResult<Self> {
        let inner = orbital_core::models::Graph::parse_dimacs(text).map_err(py_err)?;
        Ok(PyGraph { inner })
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    /// Full automorphism group.
    fn automorphisms(&self) -> PyResult<PyGroup> {
        let colored = graph_to_colored(&self.inner);
        let search = automorphism_search(&colored).map_err(py_err)?;
        Ok(PyGroup {
            order: search.order(),
            names: colored.point_names(),
            inner: search.group,
        })
    }

    /// Exact hard-core distribution at fugacity `lam`.
    #[pyo3(signature = (lam = 1.0))]
    fn distribution(&self, lam: f64) -> PyResult<PyDistribution> {
        let model = IndependentSetModel::new(self.inner.clone(), lam).map_err(py_err)?;
        Ok(PyDistribution {
            inner: model.enumerate().map_err(py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// Weighted clause set over named variables.
#[pyclass(name = "ClauseSet", module = "pyorbital", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyClauseSet {
    inner: WeightedClauseSet,
}

#[pymethods]
impl PyClauseSet {
    #[staticmethod]
    fn parse_wcnf(text: &str) -> PyResult<Self> {
        let inner = WeightedClauseSet::parse_wcnf(text).map_err(py_err)?;
        Ok(PyClauseSet { inner })
    }

    #[staticmethod]
    fn twin_clauses() -> Self {
        PyClauseSet {
            inner: WeightedClauseSet::twin_clauses(),
        }
    }

    fn to_wcnf(&self) -> String {
        self.inner.to_wcnf()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn variable_names(&self) -> Vec<String> {
        self.inner.variable_names().to_vec()
    }

    /// Automorphisms of the colored clause graph, on all of its vertices.
    fn graph_automorphisms(&self) -> PyResult<PyGroup> {
        let colored = build_colored_graph(&self.inner);
        let search = automorphism_search(&colored).map_err(py_err)?;
        Ok(PyGroup {
            order: search.order(),
            names: colored.point_names(),
            inner: search.group,
        })
    }

    /// Symmetries restricted to the variables.
    fn automorphisms(&self) -> PyResult<PyGroup> {
        let colored = build_colored_graph(&self.inner);
        let group = automorphism_search(&colored).map_err(py_err)?.group;
        Ok(PyGroup {
            order: None,
            names: PointNames::new(self.inner.variable_names().to_vec()).map_err(py_err)?,
            inner: restrict_to_variables(&group, &colored).map_err(py_err)?,
        })
    }

    /// `(variable_orbits, feature_orbits)` as brace-delimited strings.
    fn orbit_report(&self) -> PyResult<(String, String)> {
        let colored = build_colored_graph(&self.inner);
        let group = automorphism_search(&colored).map_err(py_err)?.group;
        let report = orbit_report(&group, &colored).map_err(py_err)?;
        Ok((report.format_variables(), report.format_features()))
    }

    fn distribution(&self) -> PyResult<PyDistribution> {
        let inner = ClauseModel::new(self.inner.clone()).enumerate().map_err(py_err)?;
        Ok(PyDistribution { inner })
    }
}

/// Permutation group given by generators, with point labels.
#[pyclass(name = "Group", module = "pyorbital", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    inner: PermGroup,
    names: PointNames,
    order: Option<u128>,
}

#[pymethods]
impl PyGroup {
    /// Group generated by permutations given as image lists.
    #[new]
    fn new(degree: usize, generators: Vec<Vec<usize>>) -> PyResult<Self> {
        let gens = generators
            .into_iter()
            .map(Permutation::from_images)
            .collect::<orbital_core::Result<Vec<_>>>()
            .map_err(py_err)?;
        Ok(PyGroup {
            inner: PermGroup::new(degree, gens).map_err(py_err)?,
            names: PointNames::numeric(degree),
            order: None,
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.domain_size()
    }

    fn generators(&self) -> Vec<Vec<usize>> {
        self.inner.generators().iter().map(|g| g.images().collect()).collect()
    }

    /// Generators in cycle notation.
    fn cycles(&self) -> Vec<String> {
        self.inner.generators().iter().map(|g| self.names.format(g)).collect()
    }

    fn order(&self) -> PyResult<u128> {
        match self.order {
            Some(o) => Ok(o),
            None => Ok(EnumeratedGroup::new(&self.inner, ELEMENT_GUARD)
                .map_err(py_err)?
                .order() as u128),
        }
    }

    fn point_orbits(&self) -> Vec<Vec<String>> {
        self.inner
            .point_orbits()
            .classes()
            .iter()
            .map(|c| c.iter().map(|&i| self.names.label(i).to_string()).collect())
            .collect()
    }

    fn state_orbit(&self, state: &str) -> PyResult<Vec<String>> {
        let orbit = self.inner.state_orbit(&parse_state(state)?).map_err(py_err)?;
        Ok(orbit.iter().map(State::to_string).collect())
    }

    /// Sizes of the orbits of `{0,1}^n`.
    fn cube_orbit_sizes(&self) -> PyResult<Vec<usize>> {
        cube_orbit_sizes(&self.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Group(degree={}, generators={:?})",
            self.inner.domain_size(),
            self.cycles()
        )
    }
}

/// Exact distribution over the support of a model.
#[pyclass(name = "Distribution", module = "pyorbital", frozen)]
pub struct PyDistribution {
    inner: ExactDistribution,
}

#[pymethods]
impl PyDistribution {
    fn states(&self) -> Vec<String> {
        self.inner.states().iter().map(State::to_string).collect()
    }

    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn prob(&self, state: &str) -> PyResult<f64> {
        Ok(self.inner.prob(&parse_state(state)?))
    }

    fn marginals(&self) -> Vec<f64> {
        self.inner.marginals()
    }

    fn partition_function(&self) -> f64 {
        self.inner.partition_function()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

enum AnyKernel {
    Gibbs(GibbsKernel<IndependentSetModel>),
    InsertDelete(InsertDeleteKernel),
    ClauseGibbs(GibbsKernel<ClauseModel>),
    OrbitalGibbs(OrbitalKernel<GibbsKernel<IndependentSetModel>>),
    OrbitalInsertDelete(OrbitalKernel<InsertDeleteKernel>),
    OrbitalClauseGibbs(OrbitalKernel<GibbsKernel<ClauseModel>>),
}

macro_rules! with_kernel {
    ($k:expr, $name:ident => $body:expr) => {
        match $k {
            AnyKernel::Gibbs($name) => $body,
            AnyKernel::InsertDelete($name) => $body,
            AnyKernel::ClauseGibbs($name) => $body,
            AnyKernel::OrbitalGibbs($name) => $body,
            AnyKernel::OrbitalInsertDelete($name) => $body,
            AnyKernel::OrbitalClauseGibbs($name) => $body,
        }
    };
}

/// A Markov chain on a graph (hard-core model) or a clause set.
#[pyclass(name = "Chain", module = "pyorbital")]
pub struct PyChain {
    kernel: AnyKernel,
    state: State,
    rng: ChaCha8Rng,
}

fn orbital<K: Kernel>(base: K, group: PermGroup, sampling: OrbitSampling, seed: u64) -> PyResult<OrbitalKernel<K>> {
    OrbitalKernel::new(base, group, sampling, orbit_seed(seed)).map_err(py_err)
}

fn build_kernel(
    model: &Bound<'_, PyAny>,
    kernel: &str,
    lam: f64,
    lift: bool,
    sampling: OrbitSampling,
    seed: u64,
) -> PyResult<AnyKernel> {
    if let Ok(g) = model.cast::<PyGraph>() {
        let g = g.get();
        let m = IndependentSetModel::new(g.inner.clone(), lam).map_err(py_err)?;
        let group = || g.automorphisms().map(|a| a.inner);
        return Ok(match (kernel, lift) {
            ("gibbs", false) => AnyKernel::Gibbs(GibbsKernel::new(m)),
            ("gibbs", true) => AnyKernel::OrbitalGibbs(orbital(GibbsKernel::new(m), group()?, sampling, seed)?),
            ("insert_delete", false) => AnyKernel::InsertDelete(InsertDeleteKernel::new(m)),
            ("insert_delete_drag", false) => AnyKernel::InsertDelete(InsertDeleteKernel::with_drag(m)),
            ("insert_delete", true) => {
                AnyKernel::OrbitalInsertDelete(orbital(InsertDeleteKernel::new(m), group()?, sampling, seed)?)
            }
            ("insert_delete_drag", true) => {
                AnyKernel::OrbitalInsertDelete(orbital(InsertDeleteKernel::with_drag(m), group()?, sampling, seed)?)
            }
            _ => return Err(PyValueError::new_err(format!("unknown kernel `{kernel}`"))),
        });
    }
    if let Ok(s) = model.cast::<PyClauseSet>() {
        let s = s.get();
        if kernel != "gibbs" {
            return Err(PyValueError::new_err(format!("kernel `{kernel}` needs a graph model")));
        }
        let base = GibbsKernel::new(ClauseModel::new(s.inner.clone()));
        return Ok(if lift {
            AnyKernel::OrbitalClauseGibbs(orbital(base, s.automorphisms()?.inner, sampling, seed)?)
        } else {
            AnyKernel::ClauseGibbs(base)
        });
    }
    Err(PyValueError::new_err("model must be a Graph or a ClauseSet"))
}

#[pymethods]
impl PyChain {
    /// `kernel` is one of gibbs, insert_delete, insert_delete_drag.
    #[new]
    #[pyo3(signature = (model, kernel = "gibbs", orbital = false, lam = 1.0, seed = 42, orbit_sampling = "pra", start = None))]
    fn new(
        model: &Bound<'_, PyAny>,
        kernel: &str,
        orbital: bool,
        lam: f64,
        seed: u64,
        orbit_sampling: &str,
        start: Option<&str>,
    ) -> PyResult<Self> {
        let sampling: OrbitSampling = orbit_sampling.parse().map_err(py_err)?;
        let kernel = build_kernel(model, kernel, lam, orbital, sampling, seed)?;
        let n = with_kernel!(&kernel, k => k.num_vars());
        let state = match start {
            Some(s) => parse_state(s)?,
            None => State::zeros(n),
        };
        with_kernel!(&kernel, k => k.validate(&state)).map_err(py_err)?;
        Ok(PyChain {
            kernel,
            state,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    #[getter]
    fn state(&self) -> String {
        self.state.to_string()
    }

    /// Advances `steps` times and returns every visited state.
    fn run(&mut self, steps: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            with_kernel!(&mut self.kernel, k => k.step(&mut self.state, &mut self.rng));
            out.push(self.state.to_string());
        }
        out
    }

    /// Exact transition matrix as `(states, rows)`.
    fn transition_matrix(&self) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
        let m = with_kernel!(&self.kernel, k => TransitionMatrix::of_kernel(k)).map_err(py_err)?;
        let rows = m.entries().row_iter().map(|r| r.iter().copied().collect()).collect();
        Ok((m.states().iter().map(State::to_string).collect(), rows))
    }

    /// Smallest `t` with worst-case TV distance at most `eps` after `t` steps.
    fn mixing_time(&self, eps: f64) -> PyResult<u64> {
        with_kernel!(&self.kernel, k => {
            let pi = k.stationary().map_err(py_err)?;
            let m = TransitionMatrix::of_kernel(k).map_err(py_err)?;
            exact_mixing_time(&m, &pi, eps).map_err(py_err)
        })
    }
}

/// Exhaustive rho under the graph's automorphism group, as a dict.
#[pyfunction]
fn estimate_rho(py: Python<'_>, graph: &PyGraph) -> PyResult<Py<pyo3::types::PyDict>> {
    let group = graph.automorphisms()?.inner;
    let r = rho_of(&graph.inner, &group).map_err(py_err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("rho", r.rho)?;
    d.set_item("triples", r.triples)?;
    d.set_item("distinct_orbits", r.distinct_orbits)?;
    let threshold = match fugacity_threshold(r.rho, graph.inner.max_degree()) {
        LambdaBound::Unbounded => None,
        LambdaBound::AtMost(l) => Some(l),
    };
    d.set_item("lambda_threshold", threshold)?;
    Ok(d.unbind())
}

#[pyfunction]
fn tv_distance(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    tv(&p, &q).map_err(py_err)
}

#[pymodule]
fn pyorbital(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes and functions to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyClauseSet>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyChain>()?;
    m.add_function(wrap_pyfunction!(estimate_rho, m)?)?;
    m.add_function(wrap_pyfunction!(tv_distance, m)?)?;
    Ok(())
}
