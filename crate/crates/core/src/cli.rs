//! The `orbital` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{
    estimate_rho, fugacity_threshold, GibbsKernel, InsertDeleteKernel, Kernel, OrbitSampling, OrbitalKernel,
    TransitionMatrix,
};
use crate::eval::{
    curves_to_csv, exact_mixing_time, orbit_seed, run_experiment, BaseKernel, ExperimentConfig, KernelSpec,
};
use crate::models::{coupled_pair_model, ClauseModel, Graph, IndependentSetModel, TableModel, Target};
use crate::perm::{
    cube_orbit_sizes, parse_generator_file, write_generator_file, PermGroup, Permutation, PointNames, State,
};
use crate::symmetry::{
    automorphism_search, build_colored_graph, graph_to_colored, orbit_report, restrict_to_variables, ColoredGraph,
    WeightedClauseSet,
};
use crate::{Error, Result};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

const FORMATS: &str = "\
MODELS
  A MODEL argument is a file or a builtin name.
  Builtins: grid:K, cliques:K, complete:K, path:N (hard-core models on graphs),
            twin-clauses (clauses a|~c and b|~c, weight 0.5 each),
            coupled-pair (two coupled variables with weights 1, 49, 49, 1).
  Files are recognised by their problem line.

  Weighted clauses, variables 1-based:
    c name <var> <label>        optional variable label
    p wcnf <vars> <clauses>
    <weight|H> <+-var>... 0     H marks a hard clause
    e <var> <0|1>               evidence

  Graph, vertices 1-based:
    p edge <n> <m>
    e <u> <v>

  Colored graph, vertices 1-based, unlisted vertices have color 0:
    p cgraph <n> <m>
    n <vertex> <color>
    e <u> <v>

GENERATOR FILES (aut --generators, orbits --generators), points 0-based:
    domain <n>
    name <index> <label>        optional
    (a c)(d f)(g i)             one permutation per line in cycle notation

BENCH CONFIG (key = value, # comments):
    model = grid:5
    kernels = insert_delete, insert_delete_drag, orbital_insert_delete
    lambda = 1
    seeds = 1, 2, 3, 4, 5
    max_samples = 1000000
    checkpoints = geometric     # or a list: 1000, 10000, 100000
    orbit_sampling = pra        # or exact
  Output CSV header: kernel,seed,samples,wall_seconds,tv

TRAJECTORIES (sample):
    # variables: <n>
    one state per line as a bitstring, variable 0 first

KERNELS: gibbs, insert_delete, insert_delete_drag (the last two need a graph model).

EXIT CODES: 0 success, 2 parse or usage error, 3 scale guard exceeded,
            4 numerical or contract failure.";

#[derive(Debug, Parser)]
#[command(name = "orbital", version, about = "Symmetry detection and orbital Markov chains", after_long_help = FORMATS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a generating set of the automorphism group, its order and orbits.
    Aut {
        model: String,
        /// Also write the generators to a generator file.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Print point orbits; with --states, the orbit census of {0,1}^n.
    Orbits {
        model: String,
        #[arg(long)]
        states: bool,
        /// Use the generators in this file instead of searching.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Run a chain and dump its trajectory.
    Sample {
        model: String,
        #[arg(long, default_value = "gibbs")]
        kernel: String,
        /// Resample uniformly from the orbit after each step.
        #[arg(long)]
        orbital: bool,
        #[arg(long, default_value = "pra")]
        orbit_sampling: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Keep every k-th state.
        #[arg(long, default_value_t = 1)]
        thin: u64,
        /// Start state as a bitstring.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a convergence experiment and write CSV curves.
    Bench {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive rho for a graph model and the resulting fugacity bound.
    Rho { model: String },
    /// Print the exact distribution as `state,probability` CSV.
    Exact {
        model: String,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact mixing time from matrix powers.
    Mixing {
        model: String,
        #[arg(long, default_value = "gibbs")]
        kernel: String,
        #[arg(long)]
        orbital: bool,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// A loaded model argument.
#[derive(Clone, Debug)]
pub enum Model {
    Graph { name: String, graph: Graph },
    Clauses(WeightedClauseSet),
    Colored(ColoredGraph),
    Table(TableModel),
}

pub fn load_model(spec: &str) -> Result<Model> {
    match spec {
        "twin-clauses" => return Ok(Model::Clauses(WeightedClauseSet::twin_clauses())),
        "coupled-pair" => return Ok(Model::Table(coupled_pair_model())),
        _ => {}
    }
    if let Some(graph) = Graph::from_builtin(spec)? {
        return Ok(Model::Graph {
            name: spec.to_string(),
            graph,
        });
    }
    let text = fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("cannot read model {spec}: {e}")))?;
    parse_model(&text, spec)
}

/// Dispatches on the first `p` line of a model file.
pub fn parse_model(text: &str, name: &str) -> Result<Model> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| l.starts_with("p "))
        .and_then(|l| l.split_whitespace().nth(1));
    match header {
        Some("wcnf") => Ok(Model::Clauses(WeightedClauseSet::parse_wcnf(text)?)),
        Some("edge") => Ok(Model::Graph {
            name: name.to_string(),
            graph: Graph::parse_dimacs(text)?,
        }),
        Some("cgraph") => Ok(Model::Colored(ColoredGraph::parse_cgraph(text)?)),
        Some(other) => Err(Error::parse(1, 1, format!("unknown problem type `{other}`"))),
        None => Err(Error::parse(
            1,
            1,
            "missing problem line (`p wcnf`, `p edge` or `p cgraph`)",
        )),
    }
}

/// Largest table model whose symmetries are found by trying every permutation.
const TABLE_SYMMETRY_LIMIT: usize = 8;

fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    heap_permutations(n, &mut images, &mut out);
    out
}

fn heap_permutations(k: usize, images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if k <= 1 {
        out.push(Permutation::from_images(images.clone()).expect("bijection"));
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, images, out);
        if k.is_multiple_of(2) {
            images.swap(i, k - 1);
        } else {
            images.swap(0, k - 1);
        }
    }
}

fn table_symmetries(t: &TableModel) -> Result<PermGroup> {
    let n = t.num_vars();
    if n > TABLE_SYMMETRY_LIMIT {
        return Err(Error::Guard {
            what: "table model variables for symmetry search",
            limit: TABLE_SYMMETRY_LIMIT as u64,
        });
    }
    let gens = all_permutations(n)
        .into_iter()
        .filter(|p| !p.is_identity() && t.is_symmetry(p))
        .collect();
    PermGroup::new(n, gens)
}

/// Symmetry group of the model acting on its variables, with variable names.
fn variable_group(model: &Model) -> Result<(PermGroup, PointNames)> {
    match model {
        Model::Graph { graph, .. } => {
            let g = graph_to_colored(graph);
            Ok((automorphism_search(&g)?.group, g.point_names()))
        }
        Model::Clauses(s) => {
            let g = build_colored_graph(s);
            let group = automorphism_search(&g)?.group;
            let names = PointNames::new(s.variable_names().to_vec())?;
            Ok((restrict_to_variables(&group, &g)?, names))
        }
        Model::Colored(g) => Ok((automorphism_search(g)?.group, g.point_names())),
        Model::Table(t) => Ok((table_symmetries(t)?, PointNames::alphabetic(t.num_vars()))),
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Aut { model, generators } => cmd_aut(&load_model(model)?, generators.as_deref(), out),
        Command::Orbits {
            model,
            states,
            generators,
        } => cmd_orbits(&load_model(model)?, *states, generators.as_deref(), out),
        Command::Sample {
            model,
            kernel,
            orbital,
            orbit_sampling,
            samples,
            seed,
            lambda,
            thin,
            start,
            out: path,
        } => {
            if *thin == 0 {
                return Err(Error::Invalid("--thin must be at least 1".into()));
            }
            let job = SampleJob {
                samples: *samples,
                thin: *thin,
                seed: *seed,
                start: start.as_deref().map(State::parse).transpose()?,
            };
            let setup = ChainSetup {
                kernel: parse_kernel(kernel, *orbital)?,
                lambda: *lambda,
                orbit_sampling: orbit_sampling.parse()?,
                seed: *seed,
            };
            let model = load_model(model)?;
            let text = setup.dispatch(&model, job)?;
            emit(&text, path.as_deref(), out)
        }
        Command::Bench { config, out: path } => {
            let text = fs::read_to_string(config)
                .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", config.display())))?;
            let cfg = ExperimentConfig::parse(&text, config.parent())?;
            let curves = run_experiment(&cfg)?;
            let csv = curves_to_csv(&curves);
            match path {
                Some(p) => {
                    fs::write(p, &csv)?;
                    for k in &cfg.kernels {
                        let mine: Vec<_> = curves.iter().filter(|c| c.kernel == *k).collect();
                        let sps = mine.iter().map(|c| c.seconds_per_sample()).sum::<f64>() / mine.len() as f64;
                        let tv = mine
                            .iter()
                            .map(|c| *c.tv_values.last().expect("checkpoint"))
                            .sum::<f64>()
                            / mine.len() as f64;
                        writeln!(out, "{k} seconds_per_sample {sps:.3e} final_tv {tv:.6}")?;
                    }
                    Ok(())
                }
                None => Ok(out.write_all(csv.as_bytes())?),
            }
        }
        Command::Rho { model } => {
            let Model::Graph { graph, .. } = load_model(model)? else {
                return Err(Error::Invalid("rho needs a graph model".into()));
            };
            let group = automorphism_search(&graph_to_colored(&graph))?.group;
            let r = estimate_rho(&graph, &group)?;
            let delta = graph.max_degree();
            writeln!(out, "rho {}", r.rho)?;
            writeln!(out, "triples {}", r.triples)?;
            writeln!(out, "distinct_orbits {}", r.distinct_orbits)?;
            writeln!(out, "measure uniform over ordered triples")?;
            writeln!(out, "max_degree {delta}")?;
            writeln!(out, "lambda_threshold {}", fugacity_threshold(r.rho, delta))?;
            Ok(())
        }
        Command::Exact {
            model,
            lambda,
            out: path,
        } => {
            let pi = match load_model(model)? {
                Model::Graph { graph, .. } => IndependentSetModel::new(graph, *lambda)?.enumerate()?,
                Model::Clauses(s) => ClauseModel::new(s).enumerate()?,
                Model::Table(t) => t.enumerate()?,
                Model::Colored(_) => {
                    return Err(Error::Invalid("a colored graph does not define a distribution".into()))
                }
            };
            emit(&pi.to_csv(), path.as_deref(), out)
        }
        Command::Mixing {
            model,
            kernel,
            orbital,
            lambda,
            eps,
        } => {
            let setup = ChainSetup {
                kernel: parse_kernel(kernel, *orbital)?,
                lambda: *lambda,
                orbit_sampling: OrbitSampling::Pra,
                seed: DEFAULT_SEED,
            };
            let tau = setup.dispatch(&load_model(model)?, MixingJob { eps: *eps })?;
            writeln!(out, "mixing_time {tau}")?;
            Ok(())
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_aut(model: &Model, generators: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let (graph, vars) = match model {
        Model::Graph { graph, .. } => (graph_to_colored(graph), None),
        Model::Clauses(s) => (build_colored_graph(s), Some(s)),
        Model::Colored(g) => (g.clone(), None),
        Model::Table(t) => {
            let group = table_symmetries(t)?;
            let names = PointNames::alphabetic(t.num_vars());
            let order = crate::perm::EnumeratedGroup::new(&group, crate::perm::ELEMENT_GUARD)?.order();
            print_generators(out, &names, group.generators())?;
            writeln!(out, "order {order}")?;
            if let Some(p) = generators {
                fs::write(p, write_generator_file(&names, group.generators()))?;
            }
            return Ok(());
        }
    };
    let search = automorphism_search(&graph)?;
    let names = graph.point_names();
    print_generators(out, &names, search.group.generators())?;
    match search.order() {
        Some(order) => writeln!(out, "order {order}")?,
        None => writeln!(out, "order exceeds 2^128 (generating set only)")?,
    }
    if vars.is_some() {
        let report = orbit_report(&search.group, &graph)?;
        writeln!(out, "{report}")?;
    } else {
        let orbits = search.group.point_orbits();
        writeln!(out, "orbits {}", format_partition(orbits.classes(), &names))?;
    }
    if let Some(p) = generators {
        fs::write(p, write_generator_file(&names, search.group.generators()))?;
    }
    Ok(())
}

fn print_generators(out: &mut dyn Write, names: &PointNames, gens: &[Permutation]) -> Result<()> {
    if gens.is_empty() {
        writeln!(out, "trivial group")?;
        return Ok(());
    }
    writeln!(out, "generators {}", gens.len())?;
    for g in gens {
        writeln!(out, "{}", names.format(g))?;
    }
    Ok(())
}

fn format_partition(classes: &[Vec<usize>], names: &PointNames) -> String {
    let inner: Vec<String> = classes
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter().map(|&i| names.label(i)).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    format!("{{{}}}", inner.join(","))
}

fn cmd_orbits(model: &Model, states: bool, generators: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let (group, names) = match generators {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
            let file = parse_generator_file(&text)?;
            (PermGroup::new(file.names.len(), file.generators)?, file.names)
        }
        None => variable_group(model)?,
    };
    writeln!(
        out,
        "point orbits {}",
        format_partition(group.point_orbits().classes(), &names)
    )?;
    if states {
        let sizes = cube_orbit_sizes(&group)?;
        writeln!(out, "state orbits {}", sizes.len())?;
        let mut histogram: Vec<(usize, usize)> = Vec::new();
        for s in sizes {
            match histogram.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => histogram.push((s, 1)),
            }
        }
        for (size, count) in histogram {
            writeln!(out, "size {size} count {count}")?;
        }
    }
    Ok(())
}

fn parse_kernel(name: &str, orbital: bool) -> Result<KernelSpec> {
    let spec: KernelSpec = name.parse()?;
    if spec.orbital {
        return Err(Error::Invalid(format!("use --orbital instead of the `{name}` prefix")));
    }
    Ok(KernelSpec { orbital, ..spec })
}

/// Work to do with a concrete kernel.
trait ChainJob {
    type Output;
    fn run<K: Kernel>(self, kernel: K, independent_sets: bool) -> Result<Self::Output>;
}

struct ChainSetup {
    kernel: KernelSpec,
    lambda: f64,
    orbit_sampling: OrbitSampling,
    seed: u64,
}

impl ChainSetup {
    fn dispatch<J: ChainJob>(&self, model: &Model, job: J) -> Result<J::Output> {
        let group = if self.kernel.orbital {
            Some(variable_group(model)?.0)
        } else {
            None
        };
        match (model, self.kernel.base) {
            (Model::Graph { graph, .. }, base) => {
                let m = IndependentSetModel::new(graph.clone(), self.lambda)?;
                match base {
                    BaseKernel::Gibbs => self.finish(GibbsKernel::new(m), group, job, true),
                    BaseKernel::InsertDelete => self.finish(InsertDeleteKernel::new(m), group, job, true),
                    BaseKernel::InsertDeleteDrag => self.finish(InsertDeleteKernel::with_drag(m), group, job, true),
                }
            }
            (Model::Clauses(s), BaseKernel::Gibbs) => {
                self.finish(GibbsKernel::new(ClauseModel::new(s.clone())), group, job, false)
            }
            (Model::Table(t), BaseKernel::Gibbs) => self.finish(GibbsKernel::new(t.clone()), group, job, false),
            (Model::Colored(_), _) => Err(Error::Invalid("a colored graph does not define a distribution".into())),
            (_, _) => Err(Error::Invalid(format!("kernel `{}` needs a graph model", self.kernel))),
        }
    }

    fn finish<K: Kernel, J: ChainJob>(
        &self,
        base: K,
        group: Option<PermGroup>,
        job: J,
        sets: bool,
    ) -> Result<J::Output> {
        match group {
            Some(g) => job.run(
                OrbitalKernel::new(base, g, self.orbit_sampling, orbit_seed(self.seed))?,
                sets,
            ),
            None => job.run(base, sets),
        }
    }
}

struct SampleJob {
    samples: u64,
    thin: u64,
    seed: u64,
    start: Option<State>,
}

/// Attempts at drawing a uniform support state for chains without a fixed start.
const START_ATTEMPTS: u32 = 1_000_000;

impl ChainJob for SampleJob {
    type Output = String;

    fn run<K: Kernel>(self, mut kernel: K, independent_sets: bool) -> Result<String> {
        let n = kernel.num_vars();
        let mut x = match self.start {
            Some(x) => x,
            None if independent_sets => State::zeros(n),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(orbit_seed(self.seed).rotate_left(17));
                (0..START_ATTEMPTS)
                    .map(|_| State::from_bits(&(0..n).map(|_| rng.random::<bool>()).collect::<Vec<_>>()))
                    .find(|x| kernel.log_weight(x) > f64::NEG_INFINITY)
                    .ok_or_else(|| Error::ZeroSupport("no support state found by rejection sampling".into()))?
            }
        };
        kernel.validate(&x)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut text = format!("# variables: {n}\n");
        for t in 1..=self.samples {
            kernel.step(&mut x, &mut rng);
            if t % self.thin == 0 {
                text.push_str(&x.to_string());
                text.push('\n');
            }
        }
        Ok(text)
    }
}

struct MixingJob {
    eps: f64,
}

impl ChainJob for MixingJob {
    type Output = u64;

    fn run<K: Kernel>(self, kernel: K, _: bool) -> Result<u64> {
        let pi = kernel.stationary()?;
        let matrix = TransitionMatrix::of_kernel(&kernel)?;
        exact_mixing_time(&matrix, &pi, self.eps)
    }
}
