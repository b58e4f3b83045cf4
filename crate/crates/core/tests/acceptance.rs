//! Acceptance suite: one pass/fail line per criterion on stderr.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::time::{Duration, Instant};

use orbital_core::chains::{
    check_equivariance, estimate_rho, fugacity_threshold, GibbsKernel, InsertDeleteKernel, Kernel, LambdaBound,
    OrbitSampling, OrbitalKernel, TransitionMatrix,
};
use orbital_core::eval::{exact_mixing_time, run_experiment, ExperimentConfig, TvCurve};
use orbital_core::models::{coupled_pair_model, Graph, IndependentSetModel, Target};
use orbital_core::perm::{cube_orbit_sizes, EnumeratedGroup, PermGroup, Permutation, PraSampler, State};
use orbital_core::symmetry::{
    automorphism_generators, automorphism_search, brute_force_automorphisms, build_colored_graph, graph_to_colored,
    orbit_report, restrict_to_variables, ColoredGraph, Literal, Weight, WeightedClauseSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn err(e: orbital_core::Error) -> String {
    e.to_string()
}

fn group_orders() -> Outcome {
    let mut found = Vec::new();
    for (name, graph, expected) in [
        ("grid(3)", Graph::grid(3), 8u128),
        ("connected_cliques(3)", Graph::connected_cliques(3), 24),
        ("complete_model(3)", Graph::complete_model(3), 362_880),
    ] {
        let start = Instant::now();
        let order = automorphism_search(&graph_to_colored(&graph)).map_err(err)?.order();
        within(Duration::from_secs(1), start)?;
        check(
            order == Some(expected),
            format!("{name}: order {order:?}, expected {expected}"),
        )?;
        found.push(format!("{name}={expected}"));
    }
    Ok(found.join(" "))
}

fn orbit_censuses() -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    for (name, graph, count, allowed) in [
        ("grid(3)", Graph::grid(3), 102, &[1, 2, 4, 8][..]),
        (
            "connected_cliques(3)",
            Graph::connected_cliques(3),
            70,
            &[1, 4, 6, 12, 24],
        ),
        ("complete_model(3)", Graph::complete_model(3), 10, &[1, 9, 36, 84, 126]),
    ] {
        let group = automorphism_generators(&graph_to_colored(&graph)).map_err(err)?;
        let sizes = cube_orbit_sizes(&group).map_err(err)?;
        check(
            sizes.len() == count,
            format!("{name}: {} orbits, expected {count}", sizes.len()),
        )?;
        check(
            sizes.iter().sum::<usize>() == 512,
            format!("{name}: orbits do not cover the cube"),
        )?;
        let distinct: BTreeSet<usize> = sizes.iter().copied().collect();
        check(
            distinct.iter().all(|s| allowed.contains(s)),
            format!("{name}: sizes {distinct:?} not within {allowed:?}"),
        )?;
        found.push(format!("{name}={count}"));
    }
    within(Duration::from_secs(5), start)?;
    Ok(found.join(" "))
}

fn twin_clauses() -> Outcome {
    let set = WeightedClauseSet::twin_clauses();
    let g = build_colored_graph(&set);
    check(g.vertex_count() == 8, format!("{} vertices", g.vertex_count()))?;
    check(g.edge_count() == 7, format!("{} edges", g.edge_count()))?;
    let search = automorphism_search(&g).map_err(err)?;
    check(search.order() == Some(2), format!("order {:?}", search.order()))?;
    let names = g.point_names();
    let expected = names.parse("(v_a v_b)(v_~a v_~b)(v_f1 v_f2)").map_err(err)?;
    check(
        search.group.generators() == [expected.clone()],
        format!(
            "generators {:?}",
            search
                .group
                .generators()
                .iter()
                .map(|p| names.format(p))
                .collect::<Vec<_>>()
        ),
    )?;
    let report = orbit_report(&search.group, &g).map_err(err)?;
    check(report.format_variables() == "{{a,b},{c}}", report.format_variables())?;
    check(report.format_features() == "{{f1,f2}}", report.format_features())?;
    Ok(format!("{} order 2", names.format(&expected)))
}

fn grid3_group() -> PermGroup {
    automorphism_generators(&graph_to_colored(&Graph::grid(3))).unwrap()
}

fn swap2() -> PermGroup {
    PermGroup::new(2, vec![Permutation::from_cycles(2, &[vec![0, 1]]).unwrap()]).unwrap()
}

fn reversible_orbital<K: Kernel>(name: &str, base: K, group: PermGroup) -> Result<(), String> {
    let pi = base.stationary().map_err(err)?;
    let plain = TransitionMatrix::of_kernel(&base).map_err(err)?;
    check(
        check_equivariance(&plain, &group).map_err(err)?,
        format!("{name}: base kernel not equivariant"),
    )?;
    let orbital = OrbitalKernel::new(base, group, OrbitSampling::Exact, 0).map_err(err)?;
    let m = TransitionMatrix::of_kernel(&orbital).map_err(err)?;
    check(m.max_row_defect() < 1e-12, format!("{name}: rows do not sum to 1"))?;
    let defect = m.detailed_balance_defect(&pi);
    check(defect <= 1e-12, format!("{name}: detailed balance defect {defect:e}"))?;
    check(m.is_irreducible(), format!("{name}: reducible"))?;
    check(m.is_aperiodic(), format!("{name}: period {}", m.period()))?;
    Ok(())
}

fn reversibility() -> Outcome {
    let start = Instant::now();
    reversible_orbital("coupled pair gibbs", GibbsKernel::new(coupled_pair_model()), swap2())?;
    let model = IndependentSetModel::new(Graph::grid(3), 1.0).map_err(err)?;
    let states = model.independent_sets().map_err(err)?.len();
    reversible_orbital("grid(3) insert/delete", InsertDeleteKernel::new(model), grid3_group())?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("grid(3) over {states} states"))
}

fn coupled_pair_numbers() -> Outcome {
    let s = |t: &str| State::parse(t).unwrap();
    let base = GibbsKernel::new(coupled_pair_model());
    let m = TransitionMatrix::of_kernel(&base).map_err(err)?;
    let escape = m.get(&s("10"), &s("00")) + m.get(&s("10"), &s("11"));
    check((escape - 0.02).abs() <= 1e-12, format!("escape {escape}"))?;
    check(m.get(&s("10"), &s("01")) == 0.0, "direct move to 01")?;
    let o = TransitionMatrix::of_kernel(&OrbitalKernel::new(base, swap2(), OrbitSampling::Exact, 0).map_err(err)?)
        .map_err(err)?;
    let swap = o.get(&s("10"), &s("01"));
    check((swap - 0.49).abs() <= 1e-12, format!("orbital 10->01 {swap}"))?;
    Ok(format!("escape {escape:.2} orbital {swap:.2}"))
}

fn chi_square_p(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    ChiSquared::new((counts.len() - 1) as f64).unwrap().sf(stat)
}

fn pra_uniformity() -> Outcome {
    const DRAWS: usize = 100_000;
    let start = Instant::now();
    let group = grid3_group();
    let elements = EnumeratedGroup::new(&group, 1000).map_err(err)?;
    check(elements.order() == 8, format!("group order {}", elements.order()))?;
    let index: HashMap<&Permutation, usize> = elements.elements().iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut sampler = PraSampler::with_defaults(&group, 6);
    let mut counts = vec![0u64; 8];
    for _ in 0..DRAWS {
        let g = sampler.next_element();
        counts[*index.get(&g).ok_or("element outside the group")?] += 1;
    }
    let p_group = chi_square_p(&counts);

    // corner plus adjacent edge point: trivial stabilizer, orbit of size 8
    let x = State::from_points(9, [0, 1]).map_err(err)?;
    let orbit = group.state_orbit(&x).map_err(err)?;
    check(orbit.len() == 8, format!("orbit size {}", orbit.len()))?;
    let index: HashMap<&State, usize> = orbit.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut counts = vec![0u64; 8];
    for _ in 0..DRAWS {
        let y = sampler.sample_orbit(&x).map_err(err)?;
        counts[*index.get(&y).ok_or("state outside the orbit")?] += 1;
    }
    let p_orbit = chi_square_p(&counts);
    check(p_group > 0.01, format!("group chi-square p = {p_group:.4}"))?;
    check(p_orbit > 0.01, format!("orbit chi-square p = {p_orbit:.4}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("p(group) = {p_group:.3}, p(orbit) = {p_orbit:.3}"))
}

/// Mean TV over seeds at each checkpoint.
fn mean_curve(curves: &[TvCurve], kernel: &str) -> (Vec<u64>, Vec<f64>) {
    let mine: Vec<&TvCurve> = curves.iter().filter(|c| c.kernel.to_string() == kernel).collect();
    let n = mine[0].sample_counts.len();
    let mean = (0..n)
        .map(|i| mine.iter().map(|c| c.tv_values[i]).sum::<f64>() / mine.len() as f64)
        .collect();
    (mine[0].sample_counts.clone(), mean)
}

fn convergence_ordering() -> Outcome {
    let start = Instant::now();
    let kernels = vec![
        "insert_delete".parse().unwrap(),
        "orbital_insert_delete".parse().unwrap(),
    ];
    let cfg = ExperimentConfig::new("grid:5", Graph::grid(5), kernels, (1..=5).collect(), 50_000_000).map_err(err)?;
    let curves = run_experiment(&cfg).map_err(err)?;
    let (counts, plain) = mean_curve(&curves, "insert_delete");
    let (_, orbital) = mean_curve(&curves, "orbital_insert_delete");
    for ((n, p), o) in counts.iter().zip(&plain).zip(&orbital) {
        if *n > 1000 {
            check(o <= p, format!("at {n} samples orbital TV {o:.4} > plain TV {p:.4}"))?;
        }
    }
    let first = |tv: &[f64]| counts.iter().zip(tv).find(|(_, &t)| t < 0.05).map(|(n, _)| *n);
    let (fo, fp) = (first(&orbital), first(&plain));
    match (fo, fp) {
        (Some(a), Some(b)) => check(a <= b, format!("orbital crosses 0.05 at {a}, plain at {b}"))?,
        (Some(_), None) => {}
        (None, _) => {
            return Err(format!(
                "orbital never below 0.05 (final {:.4})",
                orbital.last().unwrap()
            ))
        }
    }
    within(Duration::from_secs(600), start)?;
    let show = |f: Option<u64>| f.map_or("never".to_string(), |n| n.to_string());
    Ok(format!("TV < 0.05 at {} (orbital) vs {} (plain)", show(fo), show(fp)))
}

fn mixing_bound() -> Outcome {
    let start = Instant::now();
    let model = IndependentSetModel::new(Graph::complete_model(3), 1.0).map_err(err)?;
    let pi = model.enumerate().map_err(err)?;
    let kernel = OrbitalKernel::new(
        InsertDeleteKernel::new(model),
        PermGroup::symmetric(9),
        OrbitSampling::Pra,
        0,
    )
    .map_err(err)?;
    let m = TransitionMatrix::of_kernel(&kernel).map_err(err)?;
    let tau = exact_mixing_time(&m, &pi, 0.1).map_err(err)?;
    let bound = 9.0 * (9.0f64 / 0.1).ln();
    check((tau as f64) <= bound, format!("tau {tau} > {bound:.1}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("tau(0.1) = {tau} <= {bound:.1}"))
}

/// Exhaustive value for the 4x4 grid under its full automorphism group.
const GRID4_RHO: f64 = 5664.0 / 5752.0;

fn rho_facts() -> Outcome {
    let complete = Graph::complete_model(3);
    let r = estimate_rho(&complete, &PermGroup::symmetric(9)).map_err(err)?;
    check(r.rho == 0.0, format!("complete rho {}", r.rho))?;
    let grid = Graph::grid(4);
    let group = automorphism_generators(&graph_to_colored(&grid)).map_err(err)?;
    let r4 = estimate_rho(&grid, &group).map_err(err)?;
    check(r4.rho < 1.0, format!("grid(4) rho {}", r4.rho))?;
    check(
        (r4.rho - GRID4_RHO).abs() < 1e-15,
        format!("grid(4) rho {} moved from {GRID4_RHO}", r4.rho),
    )?;
    for delta in [3usize, 4, 5, 8] {
        let expected = 1.0 / (delta as f64 - 1.0);
        match fugacity_threshold(1.0, delta) {
            LambdaBound::AtMost(l) => check((l - expected).abs() < 1e-15, format!("threshold(1, {delta}) = {l}"))?,
            LambdaBound::Unbounded => return Err(format!("threshold(1, {delta}) unbounded")),
        }
    }
    Ok(format!("complete 0, grid(4) {:.6}", r4.rho))
}

fn random_colored_graph(rng: &mut ChaCha8Rng) -> ColoredGraph {
    let n = rng.random_range(1..=8);
    let palette = rng.random_range(1..=3);
    let density: f64 = rng.random_range(0.1..0.9);
    let colors = (0..n).map(|_| rng.random_range(0..palette)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::new(colors, edges).unwrap()
}

fn random_clause_set(rng: &mut ChaCha8Rng) -> WeightedClauseSet {
    let n = rng.random_range(1..=4);
    let mut s = WeightedClauseSet::with_numbered_variables(n);
    let mut seen = BTreeSet::new();
    for _ in 0..rng.random_range(0..=4) {
        let mut vars: Vec<usize> = (0..n).collect();
        let len = rng.random_range(1..=n.min(3));
        let mut literals: Vec<Literal> = (0..len)
            .map(|_| {
                let v = vars.remove(rng.random_range(0..vars.len()));
                Literal {
                    variable: v,
                    negated: rng.random_bool(0.5),
                }
            })
            .collect();
        literals.sort();
        let weight = [Weight::Soft(0.5), Weight::Soft(0.7), Weight::Hard][rng.random_range(0..3)];
        if seen.insert((literals.clone(), weight.key())) {
            s.add_clause(literals, weight).unwrap();
        }
    }
    if rng.random_bool(0.3) {
        s.set_evidence(rng.random_range(0..n), rng.random_bool(0.5)).unwrap();
    }
    s
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Permutation>) {
        if prefix.len() == n {
            out.push(Permutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out.sort();
    out
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nontrivial = 0;
    for case in 0..150 {
        let g = random_colored_graph(&mut rng);
        let group = automorphism_generators(&g).map_err(err)?;
        let mut brute = brute_force_automorphisms(&g).map_err(err)?;
        brute.sort();
        let generated = EnumeratedGroup::new(&group, 100_000).map_err(err)?;
        check(
            generated.elements() == &brute[..],
            format!("graph case {case}: {}", g.to_cgraph()),
        )?;
        nontrivial += usize::from(brute.len() > 1);
    }
    for case in 0..80 {
        let s = random_clause_set(&mut rng);
        let g = build_colored_graph(&s);
        let projected = restrict_to_variables(&automorphism_generators(&g).map_err(err)?, &g).map_err(err)?;
        check(
            projected.generators().iter().all(|p| s.is_symmetry(p)),
            format!(
                "clause case {case}: projected generator is not a symmetry\n{}",
                s.to_wcnf()
            ),
        )?;
        let direct: Vec<Permutation> = all_permutations(s.num_vars())
            .into_iter()
            .filter(|p| s.is_symmetry(p))
            .collect();
        let lifted = EnumeratedGroup::new(&projected, 1000).map_err(err)?;
        check(
            lifted.elements() == &direct[..],
            format!("clause case {case}: action differs\n{}", s.to_wcnf()),
        )?;
        let count = brute_force_automorphisms(&g).map_err(err)?.len();
        check(
            count == direct.len(),
            format!("clause case {case}: {count} vs {}\n{}", direct.len(), s.to_wcnf()),
        )?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("150 graphs ({nontrivial} with symmetry), 80 clause sets"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("group orders", group_orders),
        ("orbit censuses", orbit_censuses),
        ("twin clauses graph and orbits", twin_clauses),
        ("orbital chain reversibility", reversibility),
        ("coupled pair transition numbers", coupled_pair_numbers),
        ("product replacement uniformity", pra_uniformity),
        ("convergence ordering on grid(5)", convergence_ordering),
        ("mixing time bound on complete_model(3)", mixing_bound),
        ("rho facts", rho_facts),
        ("automorphism oracle equivalence", oracle_equivalence),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = match run() {
            Ok(detail) => format!("AC{:<2} PASS {name}: {detail} ({:.2?})\n", i + 1, start.elapsed()),
            Err(why) => {
                failed.push(i + 1);
                format!("AC{:<2} FAIL {name}: {why}\n", i + 1)
            }
        };
        std::io::stderr().write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
