//! Markov chain kernels, the orbital wrapper and exact transition matrices.

mod kernel;
mod matrix;
mod orbital;
mod rho;

pub use kernel::{GibbsKernel, InsertDeleteKernel, Kernel, DRAG_PROBABILITY};
pub use matrix::{check_equivariance, TransitionMatrix, MATRIX_STATE_GUARD};
pub use orbital::{OrbitSampling, OrbitalKernel, EXACT_GROUP_GUARD};
pub use rho::{estimate_rho, fugacity_threshold, LambdaBound, RhoEstimate};
