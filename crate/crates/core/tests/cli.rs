use std::fs;
use std::path::Path;

use orbital_core::cli::run;
use orbital_core::models::{Graph, IndependentSetModel};
use orbital_core::perm::State;

fn orbital(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("orbital").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Triangle with pendant paths of lengths 1 and 2 on two corners.
const ASYMMETRIC: &str = "p edge 6 6\ne 1 2\ne 2 3\ne 1 3\ne 1 4\ne 2 5\ne 5 6\n";

const TWIN_CLAUSES: &str = "c name 1 a\nc name 2 b\nc name 3 c\np wcnf 3 2\n0.5 1 -3 0\n0.5 2 -3 0\n";

#[test]
fn aut_twin_clauses_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "twin.wcnf", TWIN_CLAUSES);
    let (code, out, _) = orbital(&["aut", &path]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "generators 1");
    assert_eq!(lines[1], "(v_a v_b)(v_~a v_~b)(v_f1 v_f2)");
    assert!(out.contains("order 2\n"));
    assert!(out.contains("variables {{a,b},{c}}"));
    assert!(out.contains("features {{f1,f2}}"));
    assert_eq!(orbital(&["aut", "twin-clauses"]).1, out);
}

#[test]
fn aut_grid_and_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("grid.gens");
    let (code, out, _) = orbital(&["aut", "grid:3", "--generators", gens.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("order 8\n"));
    let (code, via_file, _) = orbital(&["orbits", "grid:3", "--states", "--generators", gens.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(via_file, orbital(&["orbits", "grid:3", "--states"]).1);
}

#[test]
fn aut_triangle_with_pendant_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "t.edge", "p edge 4 4\ne 1 2\ne 2 3\ne 1 3\ne 3 4\n");
    let (code, out, _) = orbital(&["aut", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("(a b)\norder 2\n"), "{out}");
    let path = write(dir.path(), "a.edge", ASYMMETRIC);
    let (code, out, _) = orbital(&["aut", &path]);
    assert_eq!(code, 0);
    assert!(out.starts_with("trivial group\norder 1\n"), "{out}");
}

fn census(model: &str) -> (usize, Vec<usize>) {
    let (code, out, _) = orbital(&["orbits", model, "--states"]);
    assert_eq!(code, 0);
    let count = out
        .lines()
        .find_map(|l| l.strip_prefix("state orbits "))
        .unwrap()
        .parse()
        .unwrap();
    let sizes = out
        .lines()
        .filter_map(|l| l.strip_prefix("size "))
        .map(|l| l.split_whitespace().next().unwrap().parse().unwrap())
        .collect();
    (count, sizes)
}

#[test]
fn orbit_censuses() {
    assert_eq!(census("grid:3"), (102, vec![1, 2, 4, 8]));
    assert_eq!(census("cliques:3"), (70, vec![1, 4, 6, 12, 24]));
    assert_eq!(census("complete:3"), (10, vec![1, 9, 36, 84, 126]));
}

fn trajectory(text: &str) -> Vec<State> {
    text.lines().skip(1).map(|l| State::parse(l).unwrap()).collect()
}

#[test]
fn orbital_samples_are_independent_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.txt");
    let args = [
        "sample",
        "grid:3",
        "--kernel",
        "insert_delete",
        "--orbital",
        "--samples",
        "2000",
    ];
    let (code, _, _) = orbital(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# variables: 9\n"));
    let states = trajectory(&text);
    assert_eq!(states.len(), 2000);
    let model = IndependentSetModel::new(Graph::grid(3), 1.0).unwrap();
    assert!(states.iter().all(|x| model.check_state(x).is_ok()));
    assert_eq!(orbital(&args).1, text);
    assert_ne!(orbital(&[&args[..], &["--seed", "7"]].concat()).1, text);
}

#[test]
fn trivial_group_makes_orbital_flag_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "a.edge", ASYMMETRIC);
    for kernel in ["gibbs", "insert_delete", "insert_delete_drag"] {
        let base = orbital(&["sample", &path, "--kernel", kernel, "--samples", "500", "--seed", "3"]);
        let lifted = orbital(&[
            "sample",
            &path,
            "--kernel",
            kernel,
            "--samples",
            "500",
            "--seed",
            "3",
            "--orbital",
        ]);
        assert_eq!(base.0, 0);
        assert_eq!(base.1, lifted.1, "{kernel}");
    }
}

#[test]
fn zero_samples_and_thinning() {
    let (code, out, _) = orbital(&["sample", "grid:3", "--samples", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "# variables: 9\n");
    let full = trajectory(&orbital(&["sample", "coupled-pair", "--samples", "30"]).1);
    let thin = trajectory(&orbital(&["sample", "coupled-pair", "--samples", "30", "--thin", "3"]).1);
    assert_eq!(thin, full.iter().skip(2).step_by(3).cloned().collect::<Vec<_>>());
}

#[test]
fn start_state_outside_support_is_rejected() {
    let (code, _, err) = orbital(&["sample", "grid:3", "--start", "110000000"]);
    assert_eq!(code, 4);
    assert!(err.starts_with("error:"));
    let (code, _, _) = orbital(&["sample", "grid:3", "--start", "11"]);
    assert_eq!(code, 4);
}

#[test]
fn rho_reports() {
    let (code, out, _) = orbital(&["rho", "complete:3"]);
    assert_eq!(code, 0);
    assert!(out.contains("rho 0\n"));
    assert!(out.contains("lambda_threshold unbounded\n"));
    let (_, out, _) = orbital(&["rho", "grid:4"]);
    let rho: f64 = out
        .lines()
        .next()
        .unwrap()
        .strip_prefix("rho ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(rho > 0.0 && rho < 1.0);
    assert!(out.contains("triples 5752\n"));
}

#[test]
fn exact_and_mixing() {
    let (code, out, _) = orbital(&["exact", "coupled-pair"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "state,probability");
    assert_eq!(lines.len(), 5);
    let (_, out, _) = orbital(&["exact", "grid:3"]);
    assert_eq!(out.lines().count(), 64);
    let (code, out, _) = orbital(&[
        "mixing",
        "complete:3",
        "--kernel",
        "insert_delete",
        "--orbital",
        "--eps",
        "0.1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "mixing_time 3\n");
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "b.cfg",
        "model = grid:3\nkernels = insert_delete, insert_delete_drag, orbital_insert_delete\nseeds = 1, 2\nmax_samples = 1000\ncheckpoints = 100, 1000\n",
    );
    let csv = dir.path().join("out.csv");
    let (code, out, err) = orbital(&["bench", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 3);
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "kernel,seed,samples,wall_seconds,tv");
    assert_eq!(text.lines().count(), 1 + 3 * 2 * 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.wcnf", "p wcnf 2 1\n0.5 1 x 0\n");
    let (code, _, err) = orbital(&["aut", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(orbital(&["frobnicate"]).0, 2);
    assert_eq!(orbital(&["--help"]).0, 0);
    assert!(orbital(&["--help"]).1.contains("p wcnf"));
    assert_eq!(orbital(&["orbits", "grid:5", "--states"]).0, 3);
    assert_eq!(orbital(&["mixing", "coupled-pair", "--eps", "2"]).0, 4);
}

#[test]
fn binary_exit_code() {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_orbital"))
        .args(["aut", "no-such-model"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(4));
    let ok = std::process::Command::new(env!("CARGO_BIN_EXE_orbital"))
        .args(["aut", "grid:3"])
        .output()
        .unwrap();
    assert!(String::from_utf8(ok.stdout).unwrap().contains("order 8"));
}
