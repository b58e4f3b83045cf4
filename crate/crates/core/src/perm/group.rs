use std::collections::{HashMap, HashSet, VecDeque};

use super::{Permutation, State};
use crate::{Error, Result};

/// Maximum number of states enumerated for a single state orbit.
pub const ORBIT_GUARD: u64 = 1_000_000;
/// Maximum number of group elements enumerated by the closure oracle.
pub const ELEMENT_GUARD: u64 = 10_000_000;

/// A permutation group given by generators. An empty generator list is the
/// trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    domain_size: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(domain_size: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.len() != domain_size {
                return Err(Error::SizeMismatch {
                    expected: domain_size,
                    found: g.len(),
                });
            }
        }
        Ok(PermGroup {
            domain_size,
            generators,
        })
    }

    pub fn trivial(domain_size: usize) -> Self {
        PermGroup {
            domain_size,
            generators: Vec::new(),
        }
    }

    /// The full symmetric group on `n` points, generated by the transpositions
    /// `(0 i)`.
    pub fn symmetric(n: usize) -> Self {
        let generators = (1..n)
            .map(|i| Permutation::from_cycles(n, &[vec![0, i]]).expect("valid transposition"))
            .collect();
        PermGroup {
            domain_size: n,
            generators,
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// True iff every generator is the identity.
    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    /// Orbit partition of the points, computed by union-find closure under the
    /// generators. Classes are sorted internally and ordered by minimum member.
    pub fn point_orbits(&self) -> OrbitPartition {
        let mut uf = UnionFind::new(self.domain_size);
        for g in &self.generators {
            for i in 0..self.domain_size {
                uf.union(i, g.image(i));
            }
        }
        OrbitPartition::from_labels((0..self.domain_size).map(|i| uf.find(i)))
    }

    /// Exact orbit `x^G` by breadth-first closure under the generators, sorted.
    pub fn state_orbit(&self, x: &State) -> Result<Vec<State>> {
        if x.len() != self.domain_size {
            return Err(Error::SizeMismatch {
                expected: self.domain_size,
                found: x.len(),
            });
        }
        let mut seen: HashSet<State> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(x.clone());
        queue.push_back(x.clone());
        while let Some(y) = queue.pop_front() {
            for g in &self.generators {
                let z = g.act_unchecked(&y);
                if !seen.contains(&z) {
                    if seen.len() as u64 >= ORBIT_GUARD {
                        return Err(Error::Guard {
                            what: "state orbit size",
                            limit: ORBIT_GUARD,
                        });
                    }
                    seen.insert(z.clone());
                    queue.push_back(z);
                }
            }
        }
        let mut orbit: Vec<State> = seen.into_iter().collect();
        orbit.sort();
        Ok(orbit)
    }

    /// Enumerates every group element (closure oracle for small groups).
    pub fn enumerate(&self) -> Result<EnumeratedGroup> {
        EnumeratedGroup::new(self, ELEMENT_GUARD)
    }

    /// Exact group order by element enumeration.
    pub fn order_oracle(&self) -> Result<u64> {
        Ok(self.enumerate()?.order())
    }

    /// Checks `|G| = |x^G| * |G_x|` with all three sides enumerated.
    pub fn verify_orbit_stabilizer(&self, x: &State) -> Result<bool> {
        self.enumerate()?.verify_orbit_stabilizer(self, x)
    }
}

/// Orbit census of the whole cube `{0,1}^n` under `group`: returns the sorted
/// list of orbit sizes. Intended for `n <= 20`.
pub fn cube_orbit_sizes(group: &PermGroup) -> Result<Vec<usize>> {
    let n = group.domain_size();
    if n > 20 {
        return Err(Error::Guard {
            what: "state-orbit census domain size",
            limit: 20,
        });
    }
    let total = 1usize << n;
    let mut seen = vec![false; total];
    let mut sizes = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        let orbit = group.state_orbit(&State::from_index(n, start as u64))?;
        for y in &orbit {
            seen[y.to_index() as usize] = true;
        }
        sizes.push(orbit.len());
    }
    sizes.sort_unstable();
    Ok(sizes)
}

/// All elements of a (small) permutation group, listed explicitly.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    elements: Vec<Permutation>,
}

impl EnumeratedGroup {
    pub fn new(group: &PermGroup, limit: u64) -> Result<Self> {
        let id = Permutation::identity(group.domain_size());
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut elements = vec![id.clone()];
        seen.insert(id);
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for g in group.generators() {
                let next = cur.then(g)?;
                if !seen.contains(&next) {
                    if elements.len() as u64 >= limit {
                        return Err(Error::Guard {
                            what: "group order",
                            limit,
                        });
                    }
                    seen.insert(next.clone());
                    elements.push(next);
                }
            }
        }
        elements.sort();
        Ok(EnumeratedGroup { elements })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Elements in sorted order; the identity is first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn stabilizer_order(&self, x: &State) -> Result<u64> {
        let mut count = 0;
        for g in &self.elements {
            if g.act(x)? == *x {
                count += 1;
            }
        }
        Ok(count)
    }

    /// The orbit of `x` computed from the element list (independent of the
    /// generator-closure route in [`PermGroup::state_orbit`]).
    pub fn orbit(&self, x: &State) -> Result<Vec<State>> {
        let mut orbit: Vec<State> = self.elements.iter().map(|g| g.act(x)).collect::<Result<_>>()?;
        orbit.sort();
        orbit.dedup();
        Ok(orbit)
    }

    pub fn verify_orbit_stabilizer(&self, group: &PermGroup, x: &State) -> Result<bool> {
        let orbit = group.state_orbit(x)?.len() as u64;
        Ok(self.order() == orbit * self.stabilizer_order(x)?)
    }

    /// Point orbits from pairwise reachability over the full element list.
    pub fn point_orbits(&self, n: usize) -> OrbitPartition {
        let mut label: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for g in &self.elements {
                let j = g.image(i);
                label[j] = label[j].min(i);
            }
        }
        OrbitPartition::from_labels(label.into_iter())
    }
}

/// A partition of `{0, .., n-1}` into orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl OrbitPartition {
    /// Groups points by an arbitrary representative label.
    pub fn from_labels(labels: impl Iterator<Item = usize>) -> Self {
        let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut n = 0;
        for (i, l) in labels.enumerate() {
            by_label.entry(l).or_default().push(i);
            n = i + 1;
        }
        let mut classes: Vec<Vec<usize>> = by_label.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (k, c) in classes.iter().enumerate() {
            for &i in c {
                class_of[i] = k;
            }
        }
        OrbitPartition { classes, class_of }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, point: usize) -> usize {
        self.class_of[point]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; the smaller root wins. Returns true
    /// if they were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
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
    fn trivial_group_has_singleton_orbits() {
        let g = PermGroup::trivial(4);
        assert_eq!(g.point_orbits().len(), 4);
        let x = State::parse("1010").unwrap();
        assert_eq!(g.state_orbit(&x).unwrap(), vec![x.clone()]);
        assert_eq!(g.order_oracle().unwrap(), 1);
        assert!(g.verify_orbit_stabilizer(&x).unwrap());
    }

    #[test]
    fn symmetric_group_orbits() {
        let sym = PermGroup::symmetric(9);
        assert_eq!(sym.point_orbits().classes(), &[(0..9).collect::<Vec<_>>()]);
        let x = State::from_points(9, [2, 5]).unwrap();
        assert_eq!(sym.state_orbit(&x).unwrap().len(), 36);
    }

    #[test]
    fn sym3_orbit_stabilizer() {
        let sym = PermGroup::symmetric(3);
        let x = State::parse("100").unwrap();
        let e = sym.enumerate().unwrap();
        assert_eq!(e.order(), 6);
        assert_eq!(e.stabilizer_order(&x).unwrap(), 2);
        assert!(e.verify_orbit_stabilizer(&sym, &x).unwrap());
    }

    #[test]
    fn grid_group_order_and_census() {
        let g = grid3();
        assert_eq!(g.order_oracle().unwrap(), 8);
        let sizes = cube_orbit_sizes(&g).unwrap();
        assert_eq!(sizes.len(), 102);
        assert!(sizes.iter().all(|s| [1, 2, 4, 8].contains(s)));
        assert_eq!(sizes.iter().sum::<usize>(), 512);
    }

    #[test]
    fn grid_action_on_indicator() {
        let g = grid3();
        let a = State::from_points(9, [0]).unwrap();
        let c = State::from_points(9, [2]).unwrap();
        assert_eq!(g.generators()[0].act(&a).unwrap(), c);
        assert_eq!(g.state_orbit(&a).unwrap().len(), 4);
    }

    #[test]
    fn orbit_stabilizer_over_every_grid_state() {
        let g = grid3();
        let e = g.enumerate().unwrap();
        for i in 0..512 {
            let x = State::from_index(9, i);
            assert!(e.verify_orbit_stabilizer(&g, &x).unwrap(), "{x}");
            assert_eq!(e.orbit(&x).unwrap(), g.state_orbit(&x).unwrap());
        }
    }

    #[test]
    fn point_orbits_match_enumeration() {
        let g = grid3();
        assert_eq!(g.point_orbits(), g.enumerate().unwrap().point_orbits(9));
        assert_eq!(
            g.point_orbits().classes(),
            &[vec![0, 2, 6, 8], vec![1, 3, 5, 7], vec![4]]
        );
    }

    #[test]
    fn guards_trip() {
        let sym = PermGroup::symmetric(12);
        assert!(matches!(EnumeratedGroup::new(&sym, 1000), Err(Error::Guard { .. })));
        assert!(sym.state_orbit(&State::zeros(5)).is_err());
    }
}
