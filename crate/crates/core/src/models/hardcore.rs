use crate::perm::{Permutation, State};
use crate::{Error, Result};

use super::{ExactDistribution, Graph, Target};

/// Largest number of independent sets materialised by [`IndependentSetModel::enumerate`].
pub const INDEPENDENT_SET_GUARD: u64 = 8_000_000;

/// True iff no edge of `graph` has both endpoints set in `x`.
pub fn is_independent_set(graph: &Graph, x: &State) -> bool {
    x.len() == graph.vertex_count() && x.ones().all(|v| graph.neighbors(v).iter().all(|&w| !x.get(w)))
}

/// Hard-core model `π_λ(X) = λ^{|X|} / Z` over the independent sets of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependentSetModel {
    graph: Graph,
    lambda: f64,
}

impl IndependentSetModel {
    pub fn new(graph: Graph, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Invalid(format!("lambda must be positive, got {lambda}")));
        }
        Ok(IndependentSetModel { graph, lambda })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn check_state(&self, x: &State) -> Result<()> {
        if x.len() != self.graph.vertex_count() {
            return Err(Error::SizeMismatch {
                expected: self.graph.vertex_count(),
                found: x.len(),
            });
        }
        if !is_independent_set(&self.graph, x) {
            return Err(Error::NotIndependent(x.to_string()));
        }
        Ok(())
    }

    /// All independent sets in lexicographic bitstring order, by include /
    /// exclude branching with neighbour pruning.
    pub fn independent_sets(&self) -> Result<Vec<State>> {
        let n = self.graph.vertex_count();
        let mut out = Vec::new();
        let mut current = State::zeros(n);
        let mut blocked = vec![0u32; n];
        self.branch(0, &mut current, &mut blocked, &mut out)?;
        Ok(out)
    }

    fn branch(&self, v: usize, current: &mut State, blocked: &mut [u32], out: &mut Vec<State>) -> Result<()> {
        if v == self.graph.vertex_count() {
            if out.len() as u64 >= INDEPENDENT_SET_GUARD {
                return Err(Error::Guard {
                    what: "number of independent sets",
                    limit: INDEPENDENT_SET_GUARD,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        self.branch(v + 1, current, blocked, out)?;
        if blocked[v] == 0 {
            current.set(v, true);
            for &w in self.graph.neighbors(v) {
                blocked[w] += 1;
            }
            self.branch(v + 1, current, blocked, out)?;
            for &w in self.graph.neighbors(v) {
                blocked[w] -= 1;
            }
            current.set(v, false);
        }
        Ok(())
    }
}

impl Target for IndependentSetModel {
    fn num_vars(&self) -> usize {
        self.graph.vertex_count()
    }

    fn log_weight(&self, x: &State) -> f64 {
        if is_independent_set(&self.graph, x) {
            x.count_ones() as f64 * self.lambda.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        self.graph.is_automorphism(g)
    }

    fn enumerate(&self) -> Result<ExactDistribution> {
        let states = self.independent_sets()?;
        let ln_lambda = self.lambda.ln();
        let log_weights: Vec<f64> = states.iter().map(|x| x.count_ones() as f64 * ln_lambda).collect();
        ExactDistribution::from_log_weights(self.graph.vertex_count(), states, &log_weights)
    }
}
