//! Model families and their exact distributions.

mod distribution;
pub mod graph;
mod hardcore;
mod target;

pub use distribution::ExactDistribution;
pub use graph::Graph;
pub use hardcore::{is_independent_set, IndependentSetModel, INDEPENDENT_SET_GUARD};
pub use target::{coupled_pair_model, ClauseModel, TableModel, Target, RAW_ENUMERATION_LIMIT};

/// Exact distribution of any model; see [`Target::enumerate`].
pub fn enumerate_distribution<T: Target + ?Sized>(model: &T) -> crate::Result<ExactDistribution> {
    model.enumerate()
}
