//! Symmetry detection: colored graphs of clause sets and plain graphs,
//! color refinement, automorphism search and projection onto variables.

mod clauses;
mod colored;
mod project;
mod refine;
mod search;

pub use clauses::{CanonicalKey, Literal, Weight, WeightKey, WeightedClause, WeightedClauseSet};
pub use colored::{build_colored_graph, graph_to_colored, ColoredGraph, VertexRole};
pub use project::{orbit_report, restrict_to_variables, OrbitReport};
pub use refine::{is_equitable, refine_colors};
pub use search::{
    automorphism_generators, automorphism_search, brute_force_automorphisms, AutomorphismSearch, BRUTE_FORCE_GUARD,
    SEARCH_NODE_GUARD, SEARCH_VERTEX_GUARD,
};
