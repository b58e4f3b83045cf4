use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::models::ExactDistribution;
use crate::perm::{PermGroup, State};
use crate::{Error, Result};

use super::Kernel;

/// Largest state space for which a dense transition matrix is built.
pub const MATRIX_STATE_GUARD: u64 = 10_000;

/// Dense transition matrix over an explicit state list.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    states: Vec<State>,
    index: HashMap<State, usize>,
    entries: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Exact matrix of `kernel` over the support of its stationary distribution.
    pub fn of_kernel<K: Kernel>(kernel: &K) -> Result<Self> {
        let pi = kernel.stationary()?;
        Self::over(kernel, pi.states())
    }

    /// Exact matrix of `kernel` restricted to `states`; every move must stay
    /// inside the list.
    pub fn over<K: Kernel>(kernel: &K, states: &[State]) -> Result<Self> {
        if states.len() as u64 > MATRIX_STATE_GUARD {
            return Err(Error::Guard {
                what: "transition matrix states",
                limit: MATRIX_STATE_GUARD,
            });
        }
        let index: HashMap<State, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let n = states.len();
        let mut entries = DMatrix::zeros(n, n);
        for (i, x) in states.iter().enumerate() {
            for (y, p) in kernel.transitions(x) {
                let j = *index
                    .get(&y)
                    .ok_or_else(|| Error::Internal(format!("move {x} -> {y} leaves the state space")))?;
                entries[(i, j)] += p;
            }
        }
        Ok(TransitionMatrix {
            states: states.to_vec(),
            index,
            entries,
        })
    }

    pub fn from_entries(states: Vec<State>, entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != states.len() || entries.ncols() != states.len() {
            return Err(Error::SizeMismatch {
                expected: states.len(),
                found: entries.nrows(),
            });
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(TransitionMatrix { states, index, entries })
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

    pub fn index_of(&self, x: &State) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `P(x, y)`; zero for states outside the space.
    pub fn get(&self, x: &State, y: &State) -> f64 {
        match (self.index_of(x), self.index_of(y)) {
            (Some(i), Some(j)) => self.entries[(i, j)],
            _ => 0.0,
        }
    }

    /// Largest `|Σ_y P(x, y) − 1|` over rows.
    pub fn max_row_defect(&self) -> f64 {
        self.entries
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest `|π(x)P(x,y) − π(y)P(y,x)|`, with `π` read from `pi` by state.
    pub fn detailed_balance_defect(&self, pi: &ExactDistribution) -> f64 {
        let p: Vec<f64> = self.states.iter().map(|x| pi.prob(x)).collect();
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let d = (p[i] * self.entries[(i, j)] - p[j] * self.entries[(j, i)]).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn satisfies_detailed_balance(&self, pi: &ExactDistribution, tol: f64) -> bool {
        self.detailed_balance_defect(pi) <= tol
    }

    fn reachable(&self, start: usize, forward: bool) -> Vec<Option<usize>> {
        let n = self.len();
        let mut level = vec![None; n];
        let mut queue = VecDeque::from([start]);
        level[start] = Some(0);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                let e = if forward {
                    self.entries[(i, j)]
                } else {
                    self.entries[(j, i)]
                };
                if e > 0.0 && level[j].is_none() {
                    level[j] = Some(level[i].expect("visited") + 1);
                    queue.push_back(j);
                }
            }
        }
        level
    }

    /// Single communicating class: every state reaches and is reached from the first.
    pub fn is_irreducible(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        self.reachable(0, true).iter().all(Option::is_some) && self.reachable(0, false).iter().all(Option::is_some)
    }

    /// Period of the class of the first state: gcd of `level(i) + 1 − level(j)`
    /// over positive entries inside that class.
    pub fn period(&self) -> usize {
        if self.is_empty() {
            return 1;
        }
        let fwd = self.reachable(0, true);
        let back = self.reachable(0, false);
        let n = self.len();
        let mut g = 0usize;
        for i in 0..n {
            let (Some(li), Some(_)) = (fwd[i], back[i]) else {
                continue;
            };
            for j in 0..n {
                if self.entries[(i, j)] > 0.0 {
                    if let (Some(lj), Some(_)) = (fwd[j], back[j]) {
                        g = gcd(g, (li + 1).abs_diff(lj));
                    }
                }
            }
        }
        g
    }

    pub fn is_aperiodic(&self) -> bool {
        self.period() == 1
    }

    /// Distribution after one step from `mu` (row vector times `P`).
    pub fn step_distribution(&self, mu: &[f64]) -> Vec<f64> {
        let v = nalgebra::RowDVector::from_row_slice(mu);
        (v * &self.entries).iter().copied().collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// True iff `P(x, y) = P(x^g, y^g)` within `1e-12` for every generator `g`
/// and all states; false if some `x^g` leaves the state space.
pub fn check_equivariance(matrix: &TransitionMatrix, group: &PermGroup) -> Result<bool> {
    let n = matrix.len();
    for g in group.generators() {
        let mut image = Vec::with_capacity(n);
        for x in matrix.states() {
            match matrix.index_of(&g.act(x)?) {
                Some(j) => image.push(j),
                None => return Ok(false),
            }
        }
        for i in 0..n {
            for j in 0..n {
                if (matrix.entries()[(i, j)] - matrix.entries()[(image[i], image[j])]).abs() > 1e-12 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
