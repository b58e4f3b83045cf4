//! Symmetry detection for discrete probabilistic models and orbital Markov chains.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, permutation groups, orbits and product replacement sampling.
//! * [`symmetry`]: weighted clause sets, their colored graphs and automorphism search.
//! * [`models`]: clause models, hard-core (independent set) models and exact distributions.
//! * [`chains`]: Gibbs / insert-delete kernels, the orbital wrapper and exact transition matrices.
//! * [`eval`]: total variation distance, mixing times and the convergence experiment harness.
//! * [`cli`]: the `orbital` command-line front end.

pub mod chains;
pub mod cli;
pub mod error;
pub mod eval;
pub mod models;
pub mod perm;
pub mod symmetry;

pub use error::{Error, Result};
