//! Product replacement sampling of near-uniform group elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PermGroup, Permutation, State};
use crate::{Error, Result};

pub const DEFAULT_BURNIN: usize = 60;

/// Product replacement sampler (plain variant, no accumulator).
///
/// Holds `r` registers, each a group element. A step picks distinct registers
/// `i != j`, a side and an exponent `±1`, and replaces `R_i` by `R_i R_j^{±1}`
/// (right) or `R_j^{±1} R_i` (left), returning the new `R_i`.
#[derive(Clone, Debug)]
pub struct PraSampler {
    registers: Vec<Permutation>,
    rng: ChaCha8Rng,
    burnin_done: bool,
    trivial: bool,
    domain_size: usize,
    factor: Permutation,
    scratch: Permutation,
}

impl PraSampler {
    /// Register count used by [`with_defaults`](Self::with_defaults):
    /// `max(10, 2 * generators + 2)`.
    pub fn default_registers(group: &PermGroup) -> usize {
        (2 * group.generators().len() + 2).max(10)
    }

    pub fn with_defaults(group: &PermGroup, seed: u64) -> Self {
        Self::new(group, Self::default_registers(group), DEFAULT_BURNIN, seed)
            .expect("default register count satisfies the minimum")
    }

    /// Fills `r` registers by cycling the non-identity generators, then runs
    /// `burnin` replacement steps.
    pub fn new(group: &PermGroup, r: usize, burnin: usize, seed: u64) -> Result<Self> {
        let n = group.domain_size();
        let gens: Vec<&Permutation> = group.generators().iter().filter(|g| !g.is_identity()).collect();
        let trivial = gens.is_empty();
        if !trivial && r < gens.len() + 2 {
            return Err(Error::Invalid(format!(
                "product replacement needs at least {} registers, got {r}",
                gens.len() + 2
            )));
        }
        let registers = if trivial {
            Vec::new()
        } else {
            (0..r).map(|k| gens[k % gens.len()].clone()).collect()
        };
        let mut sampler = PraSampler {
            registers,
            rng: ChaCha8Rng::seed_from_u64(seed),
            burnin_done: false,
            trivial,
            domain_size: n,
            factor: Permutation::identity(n),
            scratch: Permutation::identity(n),
        };
        if !trivial {
            for _ in 0..burnin {
                sampler.step();
            }
        }
        sampler.burnin_done = true;
        Ok(sampler)
    }

    pub fn registers(&self) -> &[Permutation] {
        &self.registers
    }

    pub fn burnin_done(&self) -> bool {
        self.burnin_done
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    fn step(&mut self) -> usize {
        let r = self.registers.len();
        let i = self.rng.random_range(0..r);
        let mut j = self.rng.random_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let right: bool = self.rng.random();
        let invert: bool = self.rng.random();
        if invert {
            self.registers[j].inverse_into(&mut self.factor);
        } else {
            self.factor.clone_from(&self.registers[j]);
        }
        // `then` is left-to-right, so R_i * F means "apply R_i, then F".
        if right {
            self.registers[i].then_into(&self.factor, &mut self.scratch);
        } else {
            self.factor.then_into(&self.registers[i], &mut self.scratch);
        }
        std::mem::swap(&mut self.registers[i], &mut self.scratch);
        i
    }

    /// One product replacement step; returns the updated register.
    pub fn next_element(&mut self) -> Permutation {
        if self.trivial {
            return Permutation::identity(self.domain_size);
        }
        let i = self.step();
        self.registers[i].clone()
    }

    /// Draws a near-uniform element of the orbit of `x`.
    pub fn sample_orbit(&mut self, x: &State) -> Result<State> {
        if x.len() != self.domain_size {
            return Err(Error::SizeMismatch {
                expected: self.domain_size,
                found: x.len(),
            });
        }
        if self.trivial {
            return Ok(x.clone());
        }
        let i = self.step();
        Ok(self.registers[i].act_unchecked(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PointNames;

    fn grid3() -> PermGroup {
        let names = PointNames::alphabetic(9);
        PermGroup::new(
            9,
            vec![
                names.parse("(a c)(d f)(g i)").unwrap(),
                names.parse("(a i)(b f)(d h)").unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_group_emits_identity() {
        let mut s = PraSampler::with_defaults(&PermGroup::trivial(5), 1);
        assert!(s.next_element().is_identity());
        let x = State::parse("10110").unwrap();
        assert_eq!(s.sample_orbit(&x).unwrap(), x);
        // identity generators count as trivial too
        let g = PermGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert!(PraSampler::with_defaults(&g, 1).next_element().is_identity());
    }

    #[test]
    fn registers_are_group_members() {
        let g = grid3();
        let e = g.enumerate().unwrap();
        let mut s = PraSampler::with_defaults(&g, 7);
        assert!(s.burnin_done());
        assert_eq!(s.registers().len(), 10);
        assert!(s.registers().iter().all(|r| e.contains(r)));
        for _ in 0..1000 {
            assert!(e.contains(&s.next_element()));
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let g = grid3();
        let mut a = PraSampler::with_defaults(&g, 99);
        let mut b = PraSampler::with_defaults(&g, 99);
        for _ in 0..200 {
            assert_eq!(a.next_element(), b.next_element());
        }
        assert_eq!(a.registers(), b.registers());
    }

    #[test]
    fn symmetric_group_draws_are_members() {
        // Sym(6) is small enough to enumerate; membership oracle on every draw
        let g = PermGroup::symmetric(6);
        let e = g.enumerate().unwrap();
        let mut s = PraSampler::with_defaults(&g, 3);
        for _ in 0..500 {
            assert!(e.contains(&s.next_element()));
        }
    }

    #[test]
    fn too_few_registers_rejected() {
        assert!(PraSampler::new(&grid3(), 3, 10, 0).is_err());
    }

    #[test]
    fn orbit_samples_stay_in_orbit() {
        let g = grid3();
        let x = State::from_points(9, [0, 5]).unwrap();
        let orbit = g.state_orbit(&x).unwrap();
        let mut s = PraSampler::with_defaults(&g, 11);
        for _ in 0..500 {
            assert!(orbit.binary_search(&s.sample_orbit(&x).unwrap()).is_ok());
        }
        assert!(s.sample_orbit(&State::zeros(4)).is_err());
    }
}
