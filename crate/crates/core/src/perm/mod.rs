//! Permutation-group algebra.
//!
//! Points are 0-based indices. Composition is left-to-right: `p.then(&q)` maps
//! `i` to `q(p(i))`. Permutations act on binary states by carrying each value
//! along with its point, so `y = g.act(&x)` satisfies `y[g(v)] = x[v]` and
//! `h.act(&g.act(&x)) == g.then(&h).act(&x)`.

mod cycles;
mod group;
mod pra;
mod state;

pub use cycles::{parse_cycles, parse_generator_file, write_generator_file, GeneratorFile, PointNames};
pub(crate) use group::UnionFind;
pub use group::{cube_orbit_sizes, EnumeratedGroup, OrbitPartition, PermGroup, ELEMENT_GUARD, ORBIT_GUARD};
pub use pra::PraSampler;
pub use state::State;

use std::fmt;

use crate::{Error, Result};

/// A bijection on `{0, .., n-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from `images[i] = p(i)`, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!(
                    "image table is not a bijection on 0..{n} (offending value {i})"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles over `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::Invalid(format!("point {a} outside domain of size {n}")));
                }
                if used[a] {
                    return Err(Error::Invalid(format!("point {a} repeated in cycles")));
                }
                used[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Left-to-right product: the result maps `i` to `other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        check_len(self.len(), other.len())?;
        Ok(Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        })
    }

    /// In-place variant of [`then`](Self::then) writing into `out`; lengths must agree.
    pub(crate) fn then_into(&self, other: &Permutation, out: &mut Permutation) {
        debug_assert_eq!(self.len(), other.len());
        out.images.clear();
        out.images.extend(self.images.iter().map(|&i| other.images[i as usize]));
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Permutation { images }
    }

    pub(crate) fn inverse_into(&self, out: &mut Permutation) {
        out.images.clear();
        out.images.resize(self.len(), 0);
        for (i, &j) in self.images.iter().enumerate() {
            out.images[j as usize] = i as u32;
        }
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.image(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.image(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Acts on a state: the value at point `v` moves to point `self(v)`.
    pub fn act(&self, x: &State) -> Result<State> {
        check_len(self.len(), x.len())?;
        Ok(self.act_unchecked(x))
    }

    #[inline]
    pub(crate) fn act_unchecked(&self, x: &State) -> State {
        let mut y = State::zeros(x.len());
        for v in x.ones() {
            y.set(self.image(v), true);
        }
        y
    }

    /// True iff the permutation maps every edge of the undirected adjacency
    /// structure onto an edge.
    pub fn preserves_adjacency(&self, adjacency: &[Vec<usize>]) -> bool {
        if self.len() != adjacency.len() {
            return false;
        }
        adjacency.iter().enumerate().all(|(u, nbrs)| {
            let gu = self.image(u);
            nbrs.iter()
                .all(|&v| adjacency[gu].binary_search(&self.image(v)).is_ok())
        })
    }
}

/// `compose(p, q)` maps `i` to `q(p(i))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.then(q)
}

/// Acts with `g` on `x`; see [`Permutation::act`].
pub fn act_on_state(g: &Permutation, x: &State) -> Result<State> {
    g.act(x)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&PointNames::numeric(self.len()).format(self))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.len(), self)
    }
}
