use std::collections::HashMap;
use std::fmt;

use crate::models::{Graph, IndependentSetModel};
use crate::perm::{PermGroup, State};
use crate::{Error, Result};

/// Exhaustive count behind [`estimate_rho`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoEstimate {
    pub rho: f64,
    /// Ordered triples `(X, v, w)` considered.
    pub triples: u64,
    /// Triples with `X ∪ {v}` outside the orbit of `X ∪ {w}`.
    pub distinct_orbits: u64,
}

/// Fraction of triples `(X, v, w)` with `{v, w}` an edge, `v, w ∉ X`, both
/// `X ∪ {v}` and `X ∪ {w}` independent, where `X ∪ {v}` is not in the orbit
/// of `X ∪ {w}`. Triples are weighted uniformly; `v` and `w` are ordered.
/// With no valid triple the value is 0.
pub fn estimate_rho(g: &Graph, group: &PermGroup) -> Result<RhoEstimate> {
    if group.domain_size() != g.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: g.vertex_count(),
            found: group.domain_size(),
        });
    }
    if let Some(p) = group.generators().iter().find(|p| !g.is_automorphism(p)) {
        return Err(Error::Invalid(format!("{p} is not an automorphism of the graph")));
    }
    let sets = IndependentSetModel::new(g.clone(), 1.0)?.independent_sets()?;
    let index: HashMap<&State, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let orbit_of = label_orbits(&sets, &index, group);

    let mut triples = 0u64;
    let mut distinct = 0u64;
    for x in &sets {
        for (v, w) in g.edges() {
            if x.get(v) || x.get(w) {
                continue;
            }
            let free = |u: usize| g.neighbors(u).iter().all(|&n| !x.get(n));
            if !(free(v) && free(w)) {
                continue;
            }
            let a = orbit_of[index[&x.with(v, true)]];
            let b = orbit_of[index[&x.with(w, true)]];
            triples += 2;
            if a != b {
                distinct += 2;
            }
        }
    }
    let rho = if triples == 0 {
        0.0
    } else {
        distinct as f64 / triples as f64
    };
    Ok(RhoEstimate {
        rho,
        triples,
        distinct_orbits: distinct,
    })
}

fn label_orbits(sets: &[State], index: &HashMap<&State, usize>, group: &PermGroup) -> Vec<usize> {
    let mut label = vec![usize::MAX; sets.len()];
    for start in 0..sets.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for p in group.generators() {
                let j = index[&p.act(&sets[i]).expect("length checked")];
                if label[j] == usize::MAX {
                    label[j] = start;
                    stack.push(j);
                }
            }
        }
    }
    label
}

/// Largest fugacity covered by the mixing bound for given `ρ` and maximum degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaBound {
    Unbounded,
    AtMost(f64),
}

impl fmt::Display for LambdaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaBound::Unbounded => f.write_str("unbounded"),
            LambdaBound::AtMost(x) => write!(f, "{x}"),
        }
    }
}

/// `Unbounded` if `ρ ≤ 1/2` or `(2ρ − 1)Δ ≤ 1`, else `1 / ((2ρ − 1)Δ − 1)`.
pub fn fugacity_threshold(rho: f64, delta: usize) -> LambdaBound {
    let slope = (2.0 * rho - 1.0) * delta as f64;
    if rho <= 0.5 || slope <= 1.0 {
        LambdaBound::Unbounded
    } else {
        LambdaBound::AtMost(1.0 / (slope - 1.0))
    }
}
