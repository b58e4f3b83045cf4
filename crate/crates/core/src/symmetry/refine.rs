use super::ColoredGraph;

/// Coarsest equitable refinement of `initial`.
///
/// Each round recolors every vertex by the pair (own color, sorted neighbour
/// colors) and numbers the distinct pairs in sorted order, until the number of
/// classes stops growing. The numbering depends only on the structure, so
/// isomorphic inputs get matching colors.
pub fn refine_colors(g: &ColoredGraph, initial: &[u32]) -> Vec<u32> {
    assert_eq!(initial.len(), g.vertex_count(), "coloring length");
    let mut colors = normalize(initial);
    let mut classes = class_count(&colors);
    let mut signatures: Vec<(u32, Vec<u32>, usize)> = Vec::with_capacity(colors.len());
    loop {
        signatures.clear();
        for v in 0..colors.len() {
            let mut around: Vec<u32> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
            around.sort_unstable();
            signatures.push((colors[v], around, v));
        }
        signatures.sort_unstable();
        let mut next = vec![0u32; colors.len()];
        let mut id = 0u32;
        for i in 0..signatures.len() {
            if i > 0 && (signatures[i].0, &signatures[i].1) != (signatures[i - 1].0, &signatures[i - 1].1) {
                id += 1;
            }
            next[signatures[i].2] = id;
        }
        let refined = if colors.is_empty() { 0 } else { id as usize + 1 };
        colors = next;
        if refined == classes {
            return colors;
        }
        classes = refined;
    }
}

/// True iff same-colored vertices see identical multisets of neighbour colors.
pub fn is_equitable(g: &ColoredGraph, colors: &[u32]) -> bool {
    let mut seen: std::collections::HashMap<u32, Vec<u32>> = std::collections::HashMap::new();
    (0..g.vertex_count()).all(|v| {
        let mut around: Vec<u32> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
        around.sort_unstable();
        match seen.get(&colors[v]) {
            Some(other) => *other == around,
            None => {
                seen.insert(colors[v], around);
                true
            }
        }
    })
}

/// Gives `v` a fresh color placed just before its old class.
pub(crate) fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let mut out: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
    out[v] = 2 * colors[v];
    normalize(&out)
}

pub(crate) fn normalize(colors: &[u32]) -> Vec<u32> {
    let mut used = colors.to_vec();
    used.sort_unstable();
    used.dedup();
    colors
        .iter()
        .map(|c| used.binary_search(c).expect("present") as u32)
        .collect()
}

pub(crate) fn class_count(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&c| c as usize + 1)
}

/// Number of vertices of each color.
pub(crate) fn cell_sizes(colors: &[u32]) -> Vec<usize> {
    let mut sizes = vec![0; class_count(colors)];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Graph;
    use crate::perm::Permutation;
    use crate::symmetry::{build_colored_graph, graph_to_colored, WeightedClauseSet};
    use proptest::prelude::*;

    #[test]
    fn complete_graph_is_already_equitable() {
        let g = graph_to_colored(&Graph::complete(5));
        assert_eq!(refine_colors(&g, g.colors()), vec![0; 5]);
    }

    #[test]
    fn path_splits_by_degree() {
        let g = graph_to_colored(&Graph::path(3));
        let c = refine_colors(&g, g.colors());
        assert_eq!(c[0], c[2]);
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn twin_clauses_separates_c() {
        let g = build_colored_graph(&WeightedClauseSet::twin_clauses());
        let c = refine_colors(&g, g.colors());
        assert!(is_equitable(&g, &c));
        // a, b, c then ~a, ~b, ~c
        assert_eq!(c[0], c[1]);
        assert_ne!(c[0], c[2]);
        assert_eq!(c[3], c[4]);
        assert_ne!(c[3], c[5]);
        assert_ne!(c[2], c[5]);
        assert_eq!(c[6], c[7]);
    }

    #[test]
    fn individualize_splits_one_vertex() {
        let c = individualize(&[0, 0, 1], 1);
        assert_eq!(c, vec![1, 0, 2]);
    }

    fn arb_graph() -> impl Strategy<Value = (Vec<u32>, Vec<(usize, usize)>)> {
        (2usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(0u32..2, n),
                proptest::collection::vec(any::<bool>(), m),
            )
                .prop_map(move |(colors, keep)| {
                    let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e).collect();
                    (colors, edges)
                })
        })
    }

    proptest! {
        #[test]
        fn refinement_is_equitable_and_relabeling_invariant((colors, edges) in arb_graph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let g = ColoredGraph::new(colors.clone(), edges.clone()).unwrap();
            let c = refine_colors(&g, g.colors());
            prop_assert!(is_equitable(&g, &c));
            let n = colors.len();
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let p = Permutation::from_images(images).unwrap();
            let mut relabeled_colors = vec![0; n];
            for v in 0..n {
                relabeled_colors[p.image(v)] = colors[v];
            }
            let h = ColoredGraph::new(
                relabeled_colors,
                edges.iter().map(|&(u, v)| (p.image(u), p.image(v))),
            )
            .unwrap();
            let d = refine_colors(&h, h.colors());
            for v in 0..n {
                prop_assert_eq!(c[v], d[p.image(v)]);
            }
        }
    }
}
