use std::collections::HashMap;
use std::fmt::Write as _;

use crate::perm::State;
use crate::{Error, Result};

/// An exactly enumerated distribution: support states with their probabilities.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    num_vars: usize,
    states: Vec<State>,
    probs: Vec<f64>,
    index: HashMap<State, usize>,
    log_partition: f64,
}

impl ExactDistribution {
    /// Normalises unnormalised log-weights (log-sum-exp). States with weight
    /// `-inf` are dropped.
    pub fn from_log_weights(num_vars: usize, states: Vec<State>, log_weights: &[f64]) -> Result<Self> {
        if states.len() != log_weights.len() {
            return Err(Error::SizeMismatch {
                expected: states.len(),
                found: log_weights.len(),
            });
        }
        let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::Invalid("distribution has empty support".into()));
        }
        let sum: f64 = log_weights.iter().map(|&lw| (lw - max).exp()).sum();
        let log_partition = max + sum.ln();
        let mut kept_states = Vec::with_capacity(states.len());
        let mut probs = Vec::with_capacity(states.len());
        for (x, &lw) in states.into_iter().zip(log_weights) {
            if lw > f64::NEG_INFINITY {
                if x.len() != num_vars {
                    return Err(Error::SizeMismatch {
                        expected: num_vars,
                        found: x.len(),
                    });
                }
                probs.push((lw - max).exp() / sum);
                kept_states.push(x);
            }
        }
        let index = kept_states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect::<HashMap<_, _>>();
        if index.len() != kept_states.len() {
            return Err(Error::Invalid("duplicate state in distribution".into()));
        }
        Ok(ExactDistribution {
            num_vars,
            states: kept_states,
            probs,
            index,
            log_partition,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, x: &State) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Probability of `x`; zero outside the support.
    pub fn prob(&self, x: &State) -> f64 {
        self.index_of(x).map_or(0.0, |i| self.probs[i])
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn partition_function(&self) -> f64 {
        self.log_partition.exp()
    }

    /// Per-variable probability of being set.
    pub fn marginals(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.num_vars];
        for (x, &p) in self.states.iter().zip(&self.probs) {
            for v in x.ones() {
                m[v] += p;
            }
        }
        m
    }

    /// `state,probability` rows; states as bitstrings with variable 0 first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,probability\n");
        for (x, p) in self.states.iter().zip(&self.probs) {
            let _ = writeln!(out, "{x},{p:e}");
        }
        out
    }
}
