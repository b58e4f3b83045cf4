use rand::Rng;

use crate::models::{ExactDistribution, IndependentSetModel, Target};
use crate::perm::{Permutation, State};
use crate::{Error, Result};

/// A Markov kernel on `{0,1}^n` with a known stationary target.
pub trait Kernel {
    fn num_vars(&self) -> usize;

    /// Log of the unnormalised stationary weight; `-inf` off the state space.
    fn log_weight(&self, x: &State) -> f64;

    /// True iff `g` leaves the stationary distribution invariant.
    fn is_symmetry(&self, g: &Permutation) -> bool;

    /// Errors unless `x` is a valid state of the chain.
    fn validate(&self, x: &State) -> Result<()>;

    /// One transition in place. `x` must already be valid.
    fn step<R: Rng + ?Sized>(&mut self, x: &mut State, rng: &mut R);

    /// Exact one-step distribution from `x`, merged by target state.
    fn transitions(&self, x: &State) -> Vec<(State, f64)>;

    /// The chain's state space with its stationary distribution.
    fn stationary(&self) -> Result<ExactDistribution>;

    /// Validated single step.
    fn try_step<R: Rng + ?Sized>(&mut self, x: &State, rng: &mut R) -> Result<State> {
        self.validate(x)?;
        let mut y = x.clone();
        self.step(&mut y, rng);
        Ok(y)
    }
}

pub(crate) fn merge(mut moves: Vec<(State, f64)>) -> Vec<(State, f64)> {
    moves.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(State, f64)> = Vec::with_capacity(moves.len());
    for (s, p) in moves {
        if p == 0.0 {
            continue;
        }
        match out.last_mut() {
            Some((last, q)) if *last == s => *q += p,
            _ => out.push((s, p)),
        }
    }
    out
}

fn check_len(n: usize, x: &State) -> Result<()> {
    if x.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: x.len(),
        });
    }
    Ok(())
}

/// Probability of setting a variable to 1 given log-weights of both values.
fn conditional_one(lw0: f64, lw1: f64) -> f64 {
    if lw1 == f64::NEG_INFINITY {
        0.0
    } else if lw0 == f64::NEG_INFINITY {
        1.0
    } else {
        1.0 / (1.0 + (lw0 - lw1).exp())
    }
}

/// Single-site Gibbs sampler: pick a variable uniformly, redraw it from its
/// exact conditional.
#[derive(Clone, Debug)]
pub struct GibbsKernel<T> {
    target: T,
}

impl<T: Target> GibbsKernel<T> {
    pub fn new(target: T) -> Self {
        GibbsKernel { target }
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    fn conditional(&self, x: &State, v: usize) -> f64 {
        let lw0 = self.target.log_weight(&x.with(v, false));
        let lw1 = self.target.log_weight(&x.with(v, true));
        conditional_one(lw0, lw1)
    }
}

impl<T: Target> Kernel for GibbsKernel<T> {
    fn num_vars(&self) -> usize {
        self.target.num_vars()
    }

    fn log_weight(&self, x: &State) -> f64 {
        self.target.log_weight(x)
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        self.target.is_symmetry(g)
    }

    fn validate(&self, x: &State) -> Result<()> {
        check_len(self.num_vars(), x)?;
        if !self.target.in_support(x) {
            return Err(Error::ZeroSupport(x.to_string()));
        }
        Ok(())
    }

    fn step<R: Rng + ?Sized>(&mut self, x: &mut State, rng: &mut R) {
        let n = self.num_vars();
        if n == 0 {
            return;
        }
        let v = rng.random_range(0..n);
        let p1 = self.conditional(x, v);
        let u: f64 = rng.random();
        x.set(v, u < p1);
    }

    fn transitions(&self, x: &State) -> Vec<(State, f64)> {
        let n = self.num_vars();
        if n == 0 {
            return vec![(x.clone(), 1.0)];
        }
        let pick = 1.0 / n as f64;
        let mut moves = Vec::with_capacity(2 * n);
        for v in 0..n {
            let p1 = self.conditional(x, v);
            moves.push((x.with(v, true), pick * p1));
            moves.push((x.with(v, false), pick * (1.0 - p1)));
        }
        merge(moves)
    }

    fn stationary(&self) -> Result<ExactDistribution> {
        self.target.enumerate()
    }
}

/// Drag acceptance probability of [`InsertDeleteKernel::with_drag`].
pub const DRAG_PROBABILITY: f64 = 0.5;

/// Insert/delete chain on the independent sets of a graph, optionally with
/// drag moves.
///
/// A vertex `v` is picked uniformly. If `v ∈ X` it is removed with probability
/// `1/(1+λ)`. If `v ∉ X` and no neighbour is occupied it is added with
/// probability `λ/(1+λ)`. With drag enabled, if `v ∉ X` has exactly one
/// occupied neighbour `u`, the chain moves to `X ∪ {v} \ {u}` with probability
/// [`DRAG_PROBABILITY`]. Otherwise the state is kept.
#[derive(Clone, Debug)]
pub struct InsertDeleteKernel {
    model: IndependentSetModel,
    drag: bool,
    delete: f64,
    insert: f64,
}

impl InsertDeleteKernel {
    pub fn new(model: IndependentSetModel) -> Self {
        Self::build(model, false)
    }

    pub fn with_drag(model: IndependentSetModel) -> Self {
        Self::build(model, true)
    }

    fn build(model: IndependentSetModel, drag: bool) -> Self {
        let lambda = model.lambda();
        InsertDeleteKernel {
            model,
            drag,
            delete: 1.0 / (1.0 + lambda),
            insert: lambda / (1.0 + lambda),
        }
    }

    pub fn model(&self) -> &IndependentSetModel {
        &self.model
    }

    pub fn has_drag(&self) -> bool {
        self.drag
    }

    /// Occupied neighbours of `v`: zero, one (with its index) or more.
    fn occupied_neighbors(&self, x: &State, v: usize) -> (usize, usize) {
        let mut count = 0;
        let mut which = usize::MAX;
        for &w in self.model.graph().neighbors(v) {
            if x.get(w) {
                count += 1;
                which = w;
                if count > 1 {
                    break;
                }
            }
        }
        (count, which)
    }
}

impl Kernel for InsertDeleteKernel {
    fn num_vars(&self) -> usize {
        self.model.num_vars()
    }

    fn log_weight(&self, x: &State) -> f64 {
        self.model.log_weight(x)
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        self.model.is_symmetry(g)
    }

    fn validate(&self, x: &State) -> Result<()> {
        self.model.check_state(x)
    }

    fn step<R: Rng + ?Sized>(&mut self, x: &mut State, rng: &mut R) {
        let n = self.num_vars();
        if n == 0 {
            return;
        }
        let v = rng.random_range(0..n);
        let u: f64 = rng.random();
        if x.get(v) {
            if u < self.delete {
                x.set(v, false);
            }
            return;
        }
        match self.occupied_neighbors(x, v) {
            (0, _) => {
                if u < self.insert {
                    x.set(v, true);
                }
            }
            (1, w) if self.drag && u < DRAG_PROBABILITY => {
                x.set(w, false);
                x.set(v, true);
            }
            _ => {}
        }
    }

    fn transitions(&self, x: &State) -> Vec<(State, f64)> {
        let n = self.num_vars();
        if n == 0 {
            return vec![(x.clone(), 1.0)];
        }
        let pick = 1.0 / n as f64;
        let mut moves = Vec::with_capacity(2 * n);
        for v in 0..n {
            let (y, p) = if x.get(v) {
                (x.with(v, false), self.delete)
            } else {
                match self.occupied_neighbors(x, v) {
                    (0, _) => (x.with(v, true), self.insert),
                    (1, w) if self.drag => (x.with(w, false).with(v, true), DRAG_PROBABILITY),
                    _ => (x.clone(), 0.0),
                }
            };
            moves.push((y, pick * p));
            moves.push((x.clone(), pick * (1.0 - p)));
        }
        merge(moves)
    }

    fn stationary(&self) -> Result<ExactDistribution> {
        self.model.enumerate()
    }
}
