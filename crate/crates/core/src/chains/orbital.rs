use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::models::ExactDistribution;
use crate::perm::{EnumeratedGroup, PermGroup, Permutation, PraSampler, State};
use crate::{Error, Result};

use super::kernel::{merge, Kernel};

/// Largest group listed element by element for exact-uniform orbit draws.
pub const EXACT_GROUP_GUARD: u64 = 100_000;

/// How orbit elements are drawn in the sampling path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitSampling {
    /// Product replacement (near-uniform group elements).
    Pra,
    /// Uniform over an explicit element list.
    Exact,
}

impl fmt::Display for OrbitSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitSampling::Pra => "pra",
            OrbitSampling::Exact => "exact",
        })
    }
}

impl FromStr for OrbitSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pra" => Ok(OrbitSampling::Pra),
            "exact" => Ok(OrbitSampling::Exact),
            other => Err(Error::Invalid(format!(
                "orbit sampling must be `pra` or `exact`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
enum Sampler {
    Trivial,
    Pra(PraSampler),
    Exact {
        elements: Vec<Permutation>,
        rng: ChaCha8Rng,
    },
}

/// Wraps a base kernel: after each base step the state is replaced by a
/// uniformly drawn element of its orbit under the group.
#[derive(Clone, Debug)]
pub struct OrbitalKernel<K> {
    base: K,
    group: PermGroup,
    sampler: Sampler,
    mode: OrbitSampling,
}

impl<K: Kernel> OrbitalKernel<K> {
    /// Fails unless every generator leaves the base target invariant. The
    /// orbit sampler has its own RNG seeded with `seed`; a trivial group never
    /// draws from it.
    pub fn new(base: K, group: PermGroup, mode: OrbitSampling, seed: u64) -> Result<Self> {
        if group.domain_size() != base.num_vars() {
            return Err(Error::SizeMismatch {
                expected: base.num_vars(),
                found: group.domain_size(),
            });
        }
        if let Some(g) = group.generators().iter().find(|g| !base.is_symmetry(g)) {
            return Err(Error::Invalid(format!(
                "{g} does not leave the target distribution invariant"
            )));
        }
        let sampler = if group.is_trivial() {
            Sampler::Trivial
        } else {
            match mode {
                OrbitSampling::Pra => Sampler::Pra(PraSampler::with_defaults(&group, seed)),
                OrbitSampling::Exact => Sampler::Exact {
                    elements: EnumeratedGroup::new(&group, EXACT_GROUP_GUARD)?.elements().to_vec(),
                    rng: ChaCha8Rng::seed_from_u64(seed),
                },
            }
        };
        Ok(OrbitalKernel {
            base,
            group,
            sampler,
            mode,
        })
    }

    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn orbit_sampling(&self) -> OrbitSampling {
        self.mode
    }

    /// Draws from the orbit of `x` with the configured sampler.
    pub fn sample_orbit(&mut self, x: &State) -> State {
        match &mut self.sampler {
            Sampler::Trivial => x.clone(),
            Sampler::Pra(pra) => pra.sample_orbit(x).expect("state length checked"),
            Sampler::Exact { elements, rng } => {
                let g = &elements[rng.random_range(0..elements.len())];
                g.act(x).expect("state length checked")
            }
        }
    }
}

impl<K: Kernel> Kernel for OrbitalKernel<K> {
    fn num_vars(&self) -> usize {
        self.base.num_vars()
    }

    fn log_weight(&self, x: &State) -> f64 {
        self.base.log_weight(x)
    }

    fn is_symmetry(&self, g: &Permutation) -> bool {
        self.base.is_symmetry(g)
    }

    fn validate(&self, x: &State) -> Result<()> {
        self.base.validate(x)
    }

    fn step<R: Rng + ?Sized>(&mut self, x: &mut State, rng: &mut R) {
        self.base.step(x, rng);
        if !matches!(self.sampler, Sampler::Trivial) {
            *x = self.sample_orbit(x);
        }
    }

    /// Each base move `x → y'` is spread uniformly over the orbit of `y'`.
    fn transitions(&self, x: &State) -> Vec<(State, f64)> {
        let mut moves = Vec::new();
        for (y, p) in self.base.transitions(x) {
            let orbit = self.group.state_orbit(&y).expect("orbit within guard");
            let share = p / orbit.len() as f64;
            moves.extend(orbit.into_iter().map(|z| (z, share)));
        }
        merge(moves)
    }

    fn stationary(&self) -> Result<ExactDistribution> {
        self.base.stationary()
    }
}
