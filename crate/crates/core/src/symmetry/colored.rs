//! Vertex-colored graphs and the `cgraph` text format.
//!
//! ```text
//! c a path on three vertices, endpoints colored 1
//! p cgraph 3 2
//! n 1 1
//! n 3 1
//! e 1 2
//! e 2 3
//! ```
//!
//! Vertices are 1-based. Vertices without an `n` line get color 0. Color ids
//! are renumbered densely in increasing order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::models::graph::{column_of, parse_usize};
use crate::models::Graph;
use crate::perm::{Permutation, PointNames};
use crate::{Error, Result};

use super::{Literal, WeightKey, WeightedClauseSet};

/// What a vertex of a colored graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexRole {
    /// Literal node `v_a` or `v_¬a`.
    Literal(Literal),
    /// Node of the clause with this index.
    Clause(usize),
    /// A vertex of a plain graph model, standing for the variable of the same index.
    Vertex(usize),
}

impl VertexRole {
    /// Variable index for positive-literal and plain vertices.
    pub fn variable(&self) -> Option<usize> {
        match *self {
            VertexRole::Literal(l) if !l.negated => Some(l.variable),
            VertexRole::Vertex(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    roles: Vec<VertexRole>,
    labels: Vec<String>,
}

impl ColoredGraph {
    /// Builds a graph from colors and an edge list. Colors are renumbered to
    /// `0..c` preserving their order; self-loops and repeated edges are rejected.
    pub fn new(colors: Vec<u32>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = colors.len();
        let roles = (0..n).map(VertexRole::Vertex).collect();
        let labels = (0..n).map(|i| (i + 1).to_string()).collect();
        Self::with_roles(colors, edges, roles, labels)
    }

    fn with_roles(
        colors: Vec<u32>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        roles: Vec<VertexRole>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = colors.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u}, {v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::Invalid(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(ColoredGraph {
            colors: densify(&colors),
            adjacency,
            roles,
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c as usize + 1)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn role(&self, v: usize) -> VertexRole {
        self.roles[v]
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn point_names(&self) -> PointNames {
        PointNames::new(self.labels.clone()).unwrap_or_else(|_| PointNames::numeric(self.vertex_count()))
    }

    /// Vertex standing for each variable, in variable order.
    pub fn variable_vertices(&self) -> Vec<usize> {
        let mut found: Vec<(usize, usize)> = self
            .roles
            .iter()
            .enumerate()
            .filter_map(|(v, r)| r.variable().map(|i| (i, v)))
            .collect();
        found.sort_unstable();
        found.into_iter().map(|(_, v)| v).collect()
    }

    /// Vertices of clause nodes, in clause order.
    pub fn clause_vertices(&self) -> Vec<usize> {
        let mut found: Vec<(usize, usize)> = self
            .roles
            .iter()
            .enumerate()
            .filter_map(|(v, r)| match r {
                VertexRole::Clause(c) => Some((*c, v)),
                _ => None,
            })
            .collect();
        found.sort_unstable();
        found.into_iter().map(|(_, v)| v).collect()
    }

    /// True iff `g` preserves colors and maps edges onto edges.
    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        g.len() == self.vertex_count()
            && (0..self.vertex_count()).all(|v| self.colors[v] == self.colors[g.image(v)])
            && g.preserves_adjacency(&self.adjacency)
    }

    pub fn parse_cgraph(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut colors: Vec<u32> = Vec::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "p" => {
                    if header.is_some() {
                        return Err(Error::parse(line_no, column_of(raw, "p"), "second problem line"));
                    }
                    if words.len() != 4 || words[1] != "cgraph" {
                        return Err(Error::parse(
                            line_no,
                            column_of(raw, "p"),
                            "expected `p cgraph <n> <m>`",
                        ));
                    }
                    let n = parse_usize(words[2], line_no, raw)?;
                    let m = parse_usize(words[3], line_no, raw)?;
                    colors = vec![0; n];
                    header = Some((n, m));
                }
                "n" | "e" => {
                    let Some((n, _)) = header else {
                        return Err(Error::parse(
                            line_no,
                            column_of(raw, words[0]),
                            "line before `p cgraph` header",
                        ));
                    };
                    if words.len() != 3 {
                        return Err(Error::parse(line_no, column_of(raw, words[0]), "expected two fields"));
                    }
                    let a = parse_usize(words[1], line_no, raw)?;
                    let b = parse_usize(words[2], line_no, raw)?;
                    let vertex = |x: usize, w: &str| {
                        if x == 0 || x > n {
                            Err(Error::parse(
                                line_no,
                                column_of(raw, w),
                                format!("vertex {x} outside 1..={n}"),
                            ))
                        } else {
                            Ok(x - 1)
                        }
                    };
                    if words[0] == "n" {
                        let v = vertex(a, words[1])?;
                        colors[v] = u32::try_from(b)
                            .map_err(|_| Error::parse(line_no, column_of(raw, words[2]), "color id too large"))?;
                    } else {
                        let (u, v) = (vertex(a, words[1])?, vertex(b, words[2])?);
                        if u == v {
                            return Err(Error::parse(line_no, column_of(raw, words[1]), "self-loop"));
                        }
                        edges.push((u, v, line_no, column_of(raw, words[1])));
                    }
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        column_of(raw, other),
                        format!("unknown line type `{other}`"),
                    ));
                }
            }
        }
        let Some((_, m)) = header else {
            return Err(Error::parse(1, 1, "missing `p cgraph` header"));
        };
        if edges.len() != m {
            return Err(Error::parse(
                1,
                1,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v, line_no, col) in &edges {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::parse(line_no, col, "duplicate edge"));
            }
        }
        ColoredGraph::new(colors, edges.into_iter().map(|(u, v, _, _)| (u, v)))
    }

    pub fn to_cgraph(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cgraph {} {}", self.vertex_count(), self.edge_count());
        for (v, &c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "n {} {c}", v + 1);
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

fn densify(colors: &[u32]) -> Vec<u32> {
    let mut used: Vec<u32> = colors.to_vec();
    used.sort_unstable();
    used.dedup();
    colors
        .iter()
        .map(|c| used.binary_search(c).expect("color present") as u32)
        .collect()
}

/// Colored graph of a clause set. Vertices are the positive literals
/// `0..n`, the negative literals `n..2n`, then one vertex per clause.
///
/// Colors before renumbering: 0 negated literal, 1 unnegated literal, one
/// color per distinct soft weight (ascending), one for hard clauses, then
/// evidence-true and evidence-false, which replace the color of the positive
/// literal of an evidence variable.
pub fn build_colored_graph(s: &WeightedClauseSet) -> ColoredGraph {
    let n = s.num_vars();
    let m = s.clauses().len();
    let mut palette: BTreeMap<WeightKey, u32> = BTreeMap::new();
    for c in s.clauses() {
        palette.insert(c.weight.key(), 0);
    }
    let mut next = 2;
    for slot in palette.values_mut() {
        *slot = next;
        next += 1;
    }
    let (evidence_true, evidence_false) = (next, next + 1);

    let mut colors = Vec::with_capacity(2 * n + m);
    let mut roles = Vec::with_capacity(2 * n + m);
    let mut labels = Vec::with_capacity(2 * n + m);
    for v in 0..n {
        colors.push(match s.evidence().get(&v) {
            Some(true) => evidence_true,
            Some(false) => evidence_false,
            None => 1,
        });
        roles.push(VertexRole::Literal(Literal::pos(v)));
        labels.push(format!("v_{}", s.variable_names()[v]));
    }
    for v in 0..n {
        colors.push(0);
        roles.push(VertexRole::Literal(Literal::neg(v)));
        labels.push(format!("v_~{}", s.variable_names()[v]));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, n + v)).collect();
    for (i, c) in s.clauses().iter().enumerate() {
        let node = 2 * n + i;
        colors.push(palette[&c.weight.key()]);
        roles.push(VertexRole::Clause(i));
        labels.push(format!("v_f{}", i + 1));
        for l in &c.literals {
            edges.push((node, if l.negated { n + l.variable } else { l.variable }));
        }
    }
    ColoredGraph::with_roles(colors, edges, roles, labels).expect("clause graph is simple")
}

/// A plain graph with every vertex colored 0; vertex `i` stands for variable `i`.
pub fn graph_to_colored(g: &Graph) -> ColoredGraph {
    let n = g.vertex_count();
    let names = PointNames::alphabetic(n);
    ColoredGraph::with_roles(
        vec![0; n],
        g.edges(),
        (0..n).map(VertexRole::Vertex).collect(),
        names.labels().to_vec(),
    )
    .expect("plain graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::Weight;

    #[test]
    fn twin_clauses_graph() {
        let g = build_colored_graph(&WeightedClauseSet::twin_clauses());
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 7);
        let count = |c: u32| g.colors().iter().filter(|&&x| x == c).count();
        assert_eq!((count(0), count(1), count(2)), (3, 3, 2));
        assert_eq!(g.color_count(), 3);
        assert_eq!(g.label(3), "v_~a");
        assert_eq!(g.label(6), "v_f1");
        assert_eq!(g.variable_vertices(), vec![0, 1, 2]);
        assert_eq!(g.clause_vertices(), vec![6, 7]);
        for v in 0..3 {
            assert!(g.has_edge(v, v + 3));
        }
    }

    #[test]
    fn single_variable_without_clauses() {
        let g = build_colored_graph(&WeightedClauseSet::with_numbered_variables(1));
        assert_eq!((g.vertex_count(), g.edge_count(), g.color_count()), (2, 1, 2));
    }

    #[test]
    fn distinct_weights_get_distinct_colors() {
        let mut s = WeightedClauseSet::twin_clauses();
        let c = s.clauses()[1].literals.clone();
        let mut t = WeightedClauseSet::new(s.variable_names().to_vec());
        t.add_clause(s.clauses()[0].literals.clone(), Weight::Soft(0.5))
            .unwrap();
        t.add_clause(c, Weight::Soft(0.7)).unwrap();
        let g = build_colored_graph(&t);
        assert_ne!(g.color(6), g.color(7));
        s.add_clause(vec![Literal::pos(2)], Weight::Hard).unwrap();
        let g = build_colored_graph(&s);
        assert_eq!(g.color_count(), 4);
    }

    #[test]
    fn evidence_recolors_positive_literal() {
        let mut s = WeightedClauseSet::twin_clauses();
        s.set_evidence(0, true).unwrap();
        let g = build_colored_graph(&s);
        assert_eq!(g.color_count(), 4);
        assert_eq!(g.color(0), 3);
        assert_eq!(g.color(3), 0);
    }

    #[test]
    fn plain_graphs() {
        let g = graph_to_colored(&Graph::grid(3));
        assert_eq!((g.vertex_count(), g.edge_count(), g.color_count()), (9, 12, 1));
        let g = graph_to_colored(&Graph::complete_model(3));
        assert_eq!(g.edge_count(), 36);
        assert_eq!(graph_to_colored(&Graph::empty(4)).edge_count(), 0);
    }

    #[test]
    fn cgraph_roundtrip_and_errors() {
        let text = "c path\np cgraph 3 2\nn 1 5\nn 3 5\ne 1 2\ne 2 3\n";
        let g = ColoredGraph::parse_cgraph(text).unwrap();
        assert_eq!(g.colors(), &[1, 0, 1]);
        assert_eq!(ColoredGraph::parse_cgraph(&g.to_cgraph()).unwrap(), g);
        let err = ColoredGraph::parse_cgraph("p cgraph 2 1\ne 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }), "{err}");
        assert!(ColoredGraph::parse_cgraph("p cgraph 2 1\ne 1 1\n").is_err());
        assert!(ColoredGraph::parse_cgraph("p cgraph 2 2\ne 1 2\ne 2 1\n").is_err());
        assert!(ColoredGraph::parse_cgraph("e 1 2\n").is_err());
    }
}
