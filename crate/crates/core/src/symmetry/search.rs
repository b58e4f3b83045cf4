use crate::perm::{PermGroup, Permutation, UnionFind};
use crate::{Error, Result};

use super::refine::{cell_sizes, class_count, individualize, refine_colors};
use super::ColoredGraph;

/// Largest graph accepted by [`automorphism_generators`].
pub const SEARCH_VERTEX_GUARD: u64 = 10_000;
/// Largest number of search-tree nodes visited by one search.
pub const SEARCH_NODE_GUARD: u64 = 5_000_000;
/// Largest number of candidate maps considered by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_GUARD: u64 = 10_000_000;

/// Outcome of an automorphism search: generators plus the stabiliser chain
/// data along the base.
#[derive(Clone, Debug)]
pub struct AutomorphismSearch {
    pub group: PermGroup,
    /// Vertices individualised along the first path.
    pub base: Vec<usize>,
    /// Orbit of `base[i]` under the stabiliser of `base[..i]`.
    pub orbit_sizes: Vec<usize>,
    pub nodes: u64,
}

impl AutomorphismSearch {
    /// Group order as the product of the basic orbit sizes; `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        self.orbit_sizes
            .iter()
            .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
    }
}

/// Generators of the color-preserving automorphism group of `g`.
pub fn automorphism_generators(g: &ColoredGraph) -> Result<PermGroup> {
    Ok(automorphism_search(g)?.group)
}

/// Individualisation-refinement search. The first path fixes a base; then,
/// from the deepest level up, every vertex of the base's target cell is tried
/// as an image of the base point, skipping vertices already in the known
/// orbit or in the orbit of a vertex shown not to be an image.
pub fn automorphism_search(g: &ColoredGraph) -> Result<AutomorphismSearch> {
    let n = g.vertex_count();
    if n as u64 > SEARCH_VERTEX_GUARD {
        return Err(Error::Guard {
            what: "colored graph vertex count",
            limit: SEARCH_VERTEX_GUARD,
        });
    }
    let mut path = vec![refine_colors(g, g.colors())];
    let mut base = Vec::new();
    let mut targets: Vec<Vec<usize>> = Vec::new();
    while class_count(path.last().expect("root")) < n {
        let colors = path.last().expect("nonempty");
        let cell = target_cell(colors);
        let b = cell[0];
        base.push(b);
        path.push(refine_colors(g, &individualize(colors, b)));
        targets.push(cell);
    }
    let leaf = path.last().expect("leaf");
    let mut leaf_vertex = vec![0; n];
    for (v, &c) in leaf.iter().enumerate() {
        leaf_vertex[c as usize] = v;
    }
    let fingerprints: Vec<Vec<usize>> = path.iter().map(|c| cell_sizes(c)).collect();
    let mut search = Search {
        g,
        path: &path,
        fingerprints,
        leaf_vertex,
        nodes: 0,
    };

    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbit_sizes = vec![1; base.len()];
    for level in (0..base.len()).rev() {
        let mut uf = UnionFind::new(n);
        for gen in &generators {
            join(&mut uf, gen);
        }
        let b = base[level];
        let mut failed: Vec<usize> = Vec::new();
        for &u in &targets[level] {
            if uf.find(u) == uf.find(b) || failed.iter().any(|&f| uf.find(f) == uf.find(u)) {
                continue;
            }
            let child = refine_colors(g, &individualize(&path[level], u));
            match search.descend(level + 1, &child)? {
                Some(gen) => {
                    join(&mut uf, &gen);
                    generators.push(gen);
                }
                None => failed.push(u),
            }
        }
        orbit_sizes[level] = (0..n).filter(|&v| uf.find(v) == uf.find(b)).count();
    }
    generators.reverse();
    Ok(AutomorphismSearch {
        group: PermGroup::new(n, generators)?,
        base,
        orbit_sizes,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    g: &'a ColoredGraph,
    path: &'a [Vec<u32>],
    fingerprints: Vec<Vec<usize>>,
    leaf_vertex: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    /// Looks for a leaf below `colors` (at `depth`) that matches the base leaf.
    fn descend(&mut self, depth: usize, colors: &[u32]) -> Result<Option<Permutation>> {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_GUARD {
            return Err(Error::Guard {
                what: "automorphism search nodes",
                limit: SEARCH_NODE_GUARD,
            });
        }
        if cell_sizes(colors) != self.fingerprints[depth] {
            return Ok(None);
        }
        if depth + 1 == self.path.len() {
            let mut images = vec![0; colors.len()];
            for (v, &c) in colors.iter().enumerate() {
                images[self.leaf_vertex[c as usize]] = v;
            }
            let p = Permutation::from_images(images)?;
            return Ok(self.g.is_automorphism(&p).then_some(p));
        }
        let target = self.path[depth][target_cell(&self.path[depth])[0]];
        let cell: Vec<usize> = (0..colors.len()).filter(|&v| colors[v] == target).collect();
        for w in cell {
            let child = refine_colors(self.g, &individualize(colors, w));
            if let Some(p) = self.descend(depth + 1, &child)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

/// Smallest non-singleton cell, ties broken by smallest color; sorted.
fn target_cell(colors: &[u32]) -> Vec<usize> {
    let sizes = cell_sizes(colors);
    let color = (0..sizes.len())
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
        .expect("coloring is not discrete") as u32;
    (0..colors.len()).filter(|&v| colors[v] == color).collect()
}

fn join(uf: &mut UnionFind, p: &Permutation) {
    for v in 0..p.len() {
        uf.union(v, p.image(v));
    }
}

/// Every color-preserving automorphism of `g`, by backtracking within color
/// classes. Sorted by image list.
pub fn brute_force_automorphisms(g: &ColoredGraph) -> Result<Vec<Permutation>> {
    let n = g.vertex_count();
    let mut candidates: u64 = 1;
    for size in cell_sizes(g.colors()) {
        for k in 2..=size as u64 {
            candidates = candidates.saturating_mul(k);
        }
    }
    if candidates > BRUTE_FORCE_GUARD {
        return Err(Error::Guard {
            what: "brute-force candidate maps",
            limit: BRUTE_FORCE_GUARD,
        });
    }
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, 0, &mut images, &mut used, &mut out);
    out.sort_by(|a: &Permutation, b| a.images().cmp(b.images()));
    Ok(out)
}

fn extend(g: &ColoredGraph, v: usize, images: &mut [usize], used: &mut [bool], out: &mut Vec<Permutation>) {
    let n = g.vertex_count();
    if v == n {
        out.push(Permutation::from_images(images.to_vec()).expect("bijection"));
        return;
    }
    for w in 0..n {
        if used[w] || g.color(w) != g.color(v) {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(images[u], w)) {
            continue;
        }
        images[v] = w;
        used[w] = true;
        extend(g, v + 1, images, used, out);
        used[w] = false;
    }
    images[v] = usize::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Graph;
    use crate::perm::EnumeratedGroup;
    use crate::symmetry::{build_colored_graph, graph_to_colored, WeightedClauseSet};
    use proptest::prelude::*;

    fn closure(g: &ColoredGraph) -> Vec<Permutation> {
        let group = automorphism_generators(g).unwrap();
        EnumeratedGroup::new(&group, 1_000_000).unwrap().elements().to_vec()
    }

    #[test]
    fn twin_clauses_generator() {
        let g = build_colored_graph(&WeightedClauseSet::twin_clauses());
        let s = automorphism_search(&g).unwrap();
        assert_eq!(s.order(), Some(2));
        assert_eq!(s.group.generators().len(), 1);
        assert_eq!(
            g.point_names().format(&s.group.generators()[0]),
            "(v_a v_b)(v_~a v_~b)(v_f1 v_f2)"
        );
        assert_eq!(brute_force_automorphisms(&g).unwrap().len(), 2);
    }

    #[test]
    fn model_graph_orders() {
        let order = |g: &Graph| automorphism_search(&graph_to_colored(g)).unwrap().order().unwrap();
        assert_eq!(order(&Graph::grid(3)), 8);
        assert_eq!(order(&Graph::connected_cliques(3)), 24);
        assert_eq!(order(&Graph::complete_model(3)), 362_880);
        assert_eq!(order(&Graph::grid(5)), 8);
        assert_eq!(order(&Graph::connected_cliques(5)), 33_592_320);
        assert_eq!(order(&Graph::empty(0)), 1);
    }

    #[test]
    fn small_oracle_cases() {
        let edge = ColoredGraph::new(vec![0, 0], [(0, 1)]).unwrap();
        assert_eq!(brute_force_automorphisms(&edge).unwrap().len(), 2);
        let triangle = ColoredGraph::new(vec![0, 1, 2], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(brute_force_automorphisms(&triangle).unwrap().len(), 1);
        assert!(automorphism_generators(&triangle).unwrap().is_trivial());
        let big = graph_to_colored(&Graph::empty(12));
        assert!(matches!(brute_force_automorphisms(&big), Err(Error::Guard { .. })));
    }

    #[test]
    fn search_matches_brute_force_on_model_graphs() {
        for g in [
            Graph::grid(3),
            Graph::connected_cliques(3),
            Graph::path(6),
            Graph::complete(5),
        ] {
            let c = graph_to_colored(&g);
            assert_eq!(closure(&c), brute_force_automorphisms(&c).unwrap());
        }
    }

    fn arb_graph() -> impl Strategy<Value = ColoredGraph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(0u32..3, n),
                proptest::collection::vec(proptest::bool::weighted(0.4), m),
            )
                .prop_map(move |(colors, keep)| {
                    let edges: Vec<(usize, usize)> =
                        pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e).collect();
                    ColoredGraph::new(colors, edges).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn search_generates_the_full_group(g in arb_graph()) {
            let s = automorphism_search(&g).unwrap();
            let all = brute_force_automorphisms(&g).unwrap();
            prop_assert_eq!(s.order(), Some(all.len() as u128));
            prop_assert_eq!(closure(&g), all);
        }
    }
}
