use std::fmt::Write as _;

use crate::perm::Permutation;
use crate::{Error, Result};

/// A simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range
    /// endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::Invalid(format!("edge {{{u}, {v}}} outside 0..{n}")));
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at {u}")));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Err(Error::Invalid(format!("duplicate edge {{{u}, {v}}}"))),
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        g.preserves_adjacency(&self.adjacency)
    }

    /// The `k x k` grid, vertices numbered row-major.
    pub fn grid(k: usize) -> Self {
        let mut g = Graph::empty(k * k);
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    g.add_edge(v, v + 1).expect("grid edge");
                }
                if r + 1 < k {
                    g.add_edge(v, v + k).expect("grid edge");
                }
            }
        }
        g
    }

    /// `k + 1` cliques of size `k - 1`, numbered block-wise, whose first vertex
    /// is joined to a hub vertex numbered last.
    pub fn connected_cliques(k: usize) -> Self {
        assert!(k >= 2, "connected cliques need k >= 2");
        let size = k - 1;
        let hub = (k + 1) * size;
        let mut g = Graph::empty(hub + 1);
        for c in 0..=k {
            let base = c * size;
            for a in 0..size {
                for b in a + 1..size {
                    g.add_edge(base + a, base + b).expect("clique edge");
                }
            }
            g.add_edge(base, hub).expect("hub edge");
        }
        g
    }

    /// The complete graph on `k * k` vertices.
    pub fn complete_model(k: usize) -> Self {
        Graph::complete(k * k)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete edge");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges")
    }

    /// Named benchmark graphs: `grid:K`, `cliques:K`, `complete:K`, `path:N`.
    /// Returns `Ok(None)` when `spec` is not of that form.
    pub fn from_builtin(spec: &str) -> Result<Option<Self>> {
        let Some((family, size)) = spec.split_once(':') else {
            return Ok(None);
        };
        let make: fn(usize) -> Graph = match family {
            "grid" => Graph::grid,
            "cliques" => Graph::connected_cliques,
            "complete" => Graph::complete_model,
            "path" => Graph::path,
            _ => return Ok(None),
        };
        let k: usize = size
            .parse()
            .map_err(|_| Error::Invalid(format!("graph size {size:?} is not a number")))?;
        if k == 0 || k > 64 || (family == "cliques" && k < 2) {
            return Err(Error::Invalid(format!("unsupported size {k} for `{family}`")));
        }
        Ok(Some(make(k)))
    }

    /// Parses the DIMACS-like edge format: `p edge <n> <m>` followed by
    /// `e <u> <v>` lines with 1-based vertices; `c` lines are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        let mut declared_edges = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "p" => {
                    if graph.is_some() {
                        return Err(Error::parse(line_no, 1, "duplicate problem line"));
                    }
                    if words.len() != 4 || words[1] != "edge" {
                        return Err(Error::parse(line_no, 1, "expected 'p edge <n> <m>'"));
                    }
                    let n = parse_usize(words[2], line_no, raw)?;
                    declared_edges = parse_usize(words[3], line_no, raw)?;
                    graph = Some(Graph::empty(n));
                }
                "e" => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, 1, "edge before problem line"))?;
                    if words.len() != 3 {
                        return Err(Error::parse(line_no, 1, "expected 'e <u> <v>'"));
                    }
                    let u = parse_vertex(words[1], g.vertex_count(), line_no, raw)?;
                    let v = parse_vertex(words[2], g.vertex_count(), line_no, raw)?;
                    g.add_edge(u, v).map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
                }
                other => {
                    return Err(Error::parse(line_no, 1, format!("unknown line type {other:?}")));
                }
            }
        }
        let g = graph.ok_or_else(|| Error::parse(1, 1, "missing 'p edge' line"))?;
        if g.edge_count() != declared_edges {
            return Err(Error::parse(
                1,
                1,
                format!("header declares {declared_edges} edges, found {}", g.edge_count()),
            ));
        }
        Ok(g)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

pub(crate) fn parse_usize(word: &str, line_no: usize, raw: &str) -> Result<usize> {
    word.parse().map_err(|_| {
        Error::parse(
            line_no,
            column_of(raw, word),
            format!("expected a count, found {word:?}"),
        )
    })
}

fn parse_vertex(word: &str, n: usize, line_no: usize, raw: &str) -> Result<usize> {
    match word.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        _ => Err(Error::parse(
            line_no,
            column_of(raw, word),
            format!("vertex {word:?} outside 1..={n}"),
        )),
    }
}

pub(crate) fn column_of(raw: &str, word: &str) -> usize {
    raw.find(word).map_or(1, |p| raw[..p].chars().count() + 1)
}
