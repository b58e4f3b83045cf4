//! Convergence measurement: TV distance, mixing times, marginals and the
//! experiment harness.

mod experiment;
mod mixing;
mod tv;

pub use experiment::{
    curves_to_csv, geometric_checkpoints, orbit_seed, run_experiment, track, BaseKernel, ExperimentConfig, KernelSpec,
    TvCurve, CSV_HEADER,
};
pub use mixing::{exact_marginals, exact_mixing_time, worst_case_distance, MIXING_TIME_CAP};
pub use tv::{empirical_distribution, tv_distance, SampleCounter};
