use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let module = PyModule::new(py, "pyorbital").unwrap();
        pyorbital::register(&module).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("po", module).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None).unwrap_or_else(|e| panic!("{e}"));
    });
}

#[test]
fn groups_and_orbits() {
    run(r#"
g = po.Graph.grid(3)
grp = g.automorphisms()
assert grp.order() == 8
assert len(grp.cube_orbit_sizes()) == 102
assert po.Graph.complete_model(3).automorphisms().order() == 362880
s = po.ClauseSet.twin_clauses()
assert s.graph_automorphisms().cycles() == ["(v_a v_b)(v_~a v_~b)(v_f1 v_f2)"]
assert s.orbit_report() == ("{{a,b},{c}}", "{{f1,f2}}")
assert s.automorphisms().order() == 2
"#);
}

#[test]
fn chains_and_distributions() {
    run(r#"
g = po.Graph.grid(3)
d = g.distribution(1.0)
assert len(d) == 63
assert abs(sum(d.probs()) - 1.0) < 1e-12
c = po.Chain(g, kernel="insert_delete", orbital=True, seed=5)
states = c.run(200)
assert len(states) == 200 and c.state == states[-1]
assert all(d.prob(x) > 0 for x in states)
again = po.Chain(g, kernel="insert_delete", orbital=True, seed=5).run(200)
assert again == states
k9 = po.Chain(po.Graph.complete_model(3), kernel="insert_delete", orbital=True)
assert k9.mixing_time(0.1) == 3
names, rows = po.Chain(g, kernel="gibbs").transition_matrix()
assert len(names) == 63 and all(abs(sum(r) - 1) < 1e-12 for r in rows)
r = po.estimate_rho(po.Graph.complete_model(3))
assert r["rho"] == 0.0 and r["lambda_threshold"] is None
assert po.tv_distance([1.0, 0.0], [0.0, 1.0]) == 1.0
try:
    po.Chain(g, start="110000000")
    raise AssertionError("accepted a dependent start")
except ValueError:
    pass
"#);
}
