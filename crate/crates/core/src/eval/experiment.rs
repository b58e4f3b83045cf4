//! Convergence experiments on hard-core models.
//!
//! Configuration is a `key = value` text file; `#` starts a comment.
//!
//! ```text
//! model = grid:5            # grid:K, cliques:K, complete:K, path:N or a `p edge` file
//! kernels = insert_delete, insert_delete_drag, orbital_insert_delete
//! lambda = 1
//! seeds = 1, 2, 3, 4, 5
//! max_samples = 1000000
//! checkpoints = geometric   # or an increasing list such as 100, 1000, 10000
//! orbit_sampling = pra      # pra or exact
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chains::{GibbsKernel, InsertDeleteKernel, Kernel, OrbitSampling, OrbitalKernel};
use crate::models::{ExactDistribution, Graph, IndependentSetModel};
use crate::perm::{PermGroup, State};
use crate::symmetry::{automorphism_generators, graph_to_colored};
use crate::{Error, Result};

use super::SampleCounter;

/// Base move of a chain on independent sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKernel {
    Gibbs,
    InsertDelete,
    InsertDeleteDrag,
}

/// A base kernel, optionally wrapped in orbit resampling. Written as
/// `insert_delete`, `orbital_insert_delete` and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelSpec {
    pub base: BaseKernel,
    pub orbital: bool,
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbital {
            f.write_str("orbital_")?;
        }
        f.write_str(match self.base {
            BaseKernel::Gibbs => "gibbs",
            BaseKernel::InsertDelete => "insert_delete",
            BaseKernel::InsertDeleteDrag => "insert_delete_drag",
        })
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (orbital, rest) = match s.strip_prefix("orbital_") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let base = match rest {
            "gibbs" => BaseKernel::Gibbs,
            "insert_delete" => BaseKernel::InsertDelete,
            "insert_delete_drag" => BaseKernel::InsertDeleteDrag,
            _ => return Err(Error::Invalid(format!("unknown kernel `{s}`"))),
        };
        Ok(KernelSpec { base, orbital })
    }
}

/// Checkpoints `1, 2, 5, 10, 20, 50, ...` up to `max`, always ending at `max`.
pub fn geometric_checkpoints(max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            match decade.checked_mul(m) {
                Some(c) if c < max => out.push(c),
                _ => break 'outer,
            }
        }
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    if max > 0 {
        out.push(max);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Model name as written in the config (builtin spec or file path).
    pub model: String,
    pub graph: Graph,
    pub kernels: Vec<KernelSpec>,
    pub lambda: f64,
    pub seeds: Vec<u64>,
    pub max_samples: u64,
    pub checkpoints: Vec<u64>,
    pub orbit_sampling: OrbitSampling,
}

impl ExperimentConfig {
    pub fn new(
        model: impl Into<String>,
        graph: Graph,
        kernels: Vec<KernelSpec>,
        seeds: Vec<u64>,
        max_samples: u64,
    ) -> Result<Self> {
        let cfg = ExperimentConfig {
            model: model.into(),
            graph,
            kernels,
            lambda: 1.0,
            seeds,
            max_samples,
            checkpoints: geometric_checkpoints(max_samples),
            orbit_sampling: OrbitSampling::Pra,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Invalid("experiment needs at least one seed".into()));
        }
        if self.kernels.is_empty() {
            return Err(Error::Invalid("experiment needs at least one kernel".into()));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Invalid(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.checkpoints.is_empty() || self.checkpoints[0] == 0 {
            return Err(Error::Invalid("checkpoints must be positive and nonempty".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("checkpoints must be strictly increasing".into()));
        }
        if *self.checkpoints.last().expect("nonempty") > self.max_samples {
            return Err(Error::Invalid("checkpoints exceed max_samples".into()));
        }
        Ok(())
    }

    /// Parses the `key = value` format; `base_dir` resolves relative model paths.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut model: Option<(String, Graph)> = None;
        let mut kernels = None;
        let mut lambda = 1.0;
        let mut seeds = vec![1];
        let mut max_samples = 100_000;
        let mut checkpoints: Option<Vec<u64>> = None;
        let mut orbit_sampling = OrbitSampling::Pra;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(line_no, 1, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            let col = raw.find(value).map_or(1, |p| raw[..p].chars().count() + 1);
            let bad = |msg: String| Error::parse(line_no, col, msg);
            match key {
                "model" => {
                    let graph = match Graph::from_builtin(value).map_err(|e| bad(e.to_string()))? {
                        Some(g) => g,
                        None => {
                            let path = match base_dir {
                                Some(dir) => dir.join(value),
                                None => Path::new(value).to_path_buf(),
                            };
                            let body = std::fs::read_to_string(&path)
                                .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
                            Graph::parse_dimacs(&body)?
                        }
                    };
                    model = Some((value.to_string(), graph));
                }
                "kernels" => {
                    kernels = Some(
                        value
                            .split(',')
                            .map(|k| k.trim().parse::<KernelSpec>().map_err(|e| bad(e.to_string())))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "lambda" => lambda = value.parse().map_err(|_| bad(format!("bad lambda {value:?}")))?,
                "seeds" => {
                    seeds = value
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| bad(format!("bad seed {s:?}"))))
                        .collect::<Result<_>>()?
                }
                "max_samples" => max_samples = value.parse().map_err(|_| bad(format!("bad max_samples {value:?}")))?,
                "checkpoints" => {
                    checkpoints = if value == "geometric" {
                        None
                    } else {
                        Some(
                            value
                                .split(',')
                                .map(|s| s.trim().parse().map_err(|_| bad(format!("bad checkpoint {s:?}"))))
                                .collect::<Result<_>>()?,
                        )
                    }
                }
                "orbit_sampling" => orbit_sampling = value.parse().map_err(|e: Error| bad(e.to_string()))?,
                other => return Err(Error::parse(line_no, 1, format!("unknown key `{other}`"))),
            }
        }
        let (model, graph) = model.ok_or_else(|| Error::parse(1, 1, "missing `model`"))?;
        let kernels = kernels.ok_or_else(|| Error::parse(1, 1, "missing `kernels`"))?;
        let cfg = ExperimentConfig {
            model,
            graph,
            kernels,
            lambda,
            seeds,
            max_samples,
            checkpoints: checkpoints.unwrap_or_else(|| geometric_checkpoints(max_samples)),
            orbit_sampling,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// TV distance of the running empirical distribution at each checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct TvCurve {
    pub model: String,
    pub kernel: KernelSpec,
    pub seed: u64,
    pub sample_counts: Vec<u64>,
    pub tv_values: Vec<f64>,
    pub wall_times: Vec<f64>,
}

impl TvCurve {
    /// First checkpoint with TV strictly below `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<u64> {
        self.sample_counts
            .iter()
            .zip(&self.tv_values)
            .find(|(_, &tv)| tv < threshold)
            .map(|(&n, _)| n)
    }

    /// Wall time per sample over the whole run.
    pub fn seconds_per_sample(&self) -> f64 {
        match (self.sample_counts.last(), self.wall_times.last()) {
            (Some(&n), Some(&t)) if n > 0 => t / n as f64,
            _ => 0.0,
        }
    }
}

pub const CSV_HEADER: &str = "kernel,seed,samples,wall_seconds,tv";

pub fn curves_to_csv(curves: &[TvCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for ((n, t), tv) in c.sample_counts.iter().zip(&c.wall_times).zip(&c.tv_values) {
            let _ = writeln!(out, "{},{},{n},{t:.6},{tv}", c.kernel, c.seed);
        }
    }
    out
}

/// Seed of the orbit sampler paired with chain seed `seed`.
pub fn orbit_seed(seed: u64) -> u64 {
    seed ^ 0x5DEE_CE66_D1CE_4E5B
}

/// Runs every kernel with every seed from the empty set and records TV
/// curves. Jobs run in parallel; results are ordered by kernel, then seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TvCurve>> {
    cfg.validate()?;
    let model = IndependentSetModel::new(cfg.graph.clone(), cfg.lambda)?;
    let pi = crate::models::Target::enumerate(&model)?;
    let group = if cfg.kernels.iter().any(|k| k.orbital) {
        automorphism_generators(&graph_to_colored(&cfg.graph))?
    } else {
        PermGroup::trivial(cfg.graph.vertex_count())
    };
    let jobs: Vec<(KernelSpec, u64)> = cfg
        .kernels
        .iter()
        .flat_map(|&k| cfg.seeds.iter().map(move |&s| (k, s)))
        .collect();
    jobs.par_iter()
        .map(|&(spec, seed)| run_job(cfg, &model, &pi, &group, spec, seed))
        .collect()
}

fn run_job(
    cfg: &ExperimentConfig,
    model: &IndependentSetModel,
    pi: &ExactDistribution,
    group: &PermGroup,
    spec: KernelSpec,
    seed: u64,
) -> Result<TvCurve> {
    let m = model.clone();
    let points = &cfg.checkpoints;
    let wrap = |kernel| OrbitalKernel::new(kernel, group.clone(), cfg.orbit_sampling, orbit_seed(seed));
    let (counts, tvs, times) = match (spec.base, spec.orbital) {
        (BaseKernel::Gibbs, false) => track(GibbsKernel::new(m), seed, points, pi)?,
        (BaseKernel::Gibbs, true) => track(
            OrbitalKernel::new(GibbsKernel::new(m), group.clone(), cfg.orbit_sampling, orbit_seed(seed))?,
            seed,
            points,
            pi,
        )?,
        (BaseKernel::InsertDelete, false) => track(InsertDeleteKernel::new(m), seed, points, pi)?,
        (BaseKernel::InsertDelete, true) => track(wrap(InsertDeleteKernel::new(m))?, seed, points, pi)?,
        (BaseKernel::InsertDeleteDrag, false) => track(InsertDeleteKernel::with_drag(m), seed, points, pi)?,
        (BaseKernel::InsertDeleteDrag, true) => track(wrap(InsertDeleteKernel::with_drag(m))?, seed, points, pi)?,
    };
    Ok(TvCurve {
        model: cfg.model.clone(),
        kernel: spec,
        seed,
        sample_counts: counts,
        tv_values: tvs,
        wall_times: times,
    })
}

type Track = (Vec<u64>, Vec<f64>, Vec<f64>);

/// Runs `kernel` from the empty state, counting `X_1, X_2, ...` and
/// evaluating TV at each checkpoint.
pub fn track<K: Kernel>(mut kernel: K, seed: u64, checkpoints: &[u64], pi: &ExactDistribution) -> Result<Track> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = State::zeros(kernel.num_vars());
    kernel.validate(&x)?;
    let mut counter = SampleCounter::new(pi);
    let (mut counts, mut tvs, mut times) = (Vec::new(), Vec::new(), Vec::new());
    let start = Instant::now();
    let mut t = 0u64;
    for &c in checkpoints {
        while t < c {
            kernel.step(&mut x, &mut rng);
            counter.record(&x)?;
            t += 1;
        }
        times.push(start.elapsed().as_secs_f64());
        counts.push(c);
        tvs.push(counter.tv_to(pi)?);
    }
    Ok((counts, tvs, times))
}
