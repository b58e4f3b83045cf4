use crate::perm::{Permutation, State};
use crate::symmetry::WeightedClauseSet;
use crate::{Error, Result};

use super::ExactDistribution;

/// Largest `n` for which `{0,1}^n` is scanned exhaustively.
pub const RAW_ENUMERATION_LIMIT: usize = 24;

/// An unnormalised distribution over `{0,1}^n`.
pub trait Target {
    fn num_vars(&self) -> usize;

    /// Natural logarithm of the unnormalised weight; `-inf` outside the support.
    fn log_weight(&self, x: &State) -> f64;

    fn weight(&self, x: &State) -> f64 {
        self.log_weight(x).exp()
    }

    fn in_support(&self, x: &State) -> bool {
        self.log_weight(x) > f64::NEG_INFINITY
    }

    /// True iff `g` leaves the distribution invariant: `π(x) = π(x^g)` for all `x`.
    fn is_symmetry(&self, g: &Permutation) -> bool;

    /// Exact normalised distribution over the support.
    fn enumerate(&self) -> Result<ExactDistribution> {
        let n = self.num_vars();
        if n > RAW_ENUMERATION_LIMIT {
            return Err(Error::Guard {
                what: "raw state-space size (2^n)",
                limit: 1 << RAW_ENUMERATION_LIMIT,
            });
        }
        let mut states = Vec::new();
        let mut log_weights = Vec::new();
        for i in 0..1u64 << n {
            let x = State::from_index(n, i);
            let lw = self.log_weight(&x);
            if lw > f64::NEG_INFINITY {
                states.push(x);
                log_weights.push(lw);
            }
        }
        ExactDistribution::from_log_weights(n, states, &log_weights)
    }
}

/// Markov-logic style model: `w(x) = exp(Σ soft clauses satisfied by x)`,
/// zero when a hard clause or an evidence literal is violated.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseModel {
    clauses: WeightedClauseSet,
}

impl ClauseModel {
    pub fn new(clauses: WeightedClauseSet) -> Self {
        ClauseModel { clauses }
    }

    pub fn clause_set(&self) -> &WeightedClauseSet {
        &self.clauses
    }

    pub fn unnormalized_weight(&self, x: &State) -> Result<f64> {
        if x.len() != self.num_vars() {
            return Err(Error::SizeMismatch {
                expected: self.num_vars(),
                found: x.len(),
            });
        }
        Ok(self.weight(x))
    }
}

impl Target for ClauseModel {
    fn num_vars(&self) -> usize {
        self.clauses.num_vars()
    }

    fn log_weight(&self, x: &State) -> f64 {
        if self.clauses.evidence().iter().any(|(&v, &b)| x.get(v) != b) {
            return f64::NEG_INFINITY;
        }
        let mut total = 0.0;
        for c in self.clauses.clauses() {
            let sat = c.is_satisfied_by(x);
            match c.weight {
                crate::symmetry::Weight::Hard if !sat => return f64::NEG_INFINITY,
                crate::symmetry::Weight::Soft(w) if sat => total += w,
                _ => {}
            }
        }
        total
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        self.clauses.is_symmetry(g)
    }
}

/// An explicit weight table over `{0,1}^n`, indexed by [`State::to_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct TableModel {
    n: usize,
    weights: Vec<f64>,
}

impl TableModel {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n > RAW_ENUMERATION_LIMIT || weights.len() != 1 << n {
            return Err(Error::Invalid(format!("table over {n} variables needs 2^{n} weights")));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Invalid("table weights must be finite and nonnegative".into()));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::Invalid("table has empty support".into()));
        }
        Ok(TableModel { n, weights })
    }

    /// Two binary variables coupled by one symmetric potential with
    /// `φ(0,0) = φ(1,1) = 1` and `φ(0,1) = φ(1,0) = 49`, so that
    /// `π = (0.01, 0.49, 0.49, 0.01)` over `00, 01, 10, 11`.
    pub fn coupled_pair() -> Self {
        TableModel::new(2, vec![1.0, 49.0, 49.0, 1.0]).expect("valid table")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Target for TableModel {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn log_weight(&self, x: &State) -> f64 {
        self.weights[x.to_index() as usize].ln()
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        g.len() == self.n
            && (0..1u64 << self.n).all(|i| {
                let x = State::from_index(self.n, i);
                self.weights[i as usize] == self.weights[g.act_unchecked(&x).to_index() as usize]
            })
    }
}

pub fn coupled_pair_model() -> TableModel {
    TableModel::coupled_pair()
}
