use std::fmt;

use crate::perm::{PermGroup, Permutation};
use crate::{Error, Result};

use super::{ColoredGraph, VertexRole};

/// Projects a group on the vertices of `g` to the variables: each generator is
/// read off on the positive-literal (or plain) vertices.
pub fn restrict_to_variables(group: &PermGroup, g: &ColoredGraph) -> Result<PermGroup> {
    if group.domain_size() != g.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: g.vertex_count(),
            found: group.domain_size(),
        });
    }
    let vars = g.variable_vertices();
    let mut generators = Vec::with_capacity(group.generators().len());
    for gen in group.generators() {
        let mut images = Vec::with_capacity(vars.len());
        for &v in &vars {
            let target = gen.image(v);
            match g.role(target).variable() {
                Some(i) => images.push(i),
                None => {
                    return Err(Error::Internal(format!(
                        "generator maps variable vertex {} to {}",
                        g.label(v),
                        g.label(target)
                    )))
                }
            }
        }
        let p = Permutation::from_images(images)
            .map_err(|_| Error::Internal("generator does not permute the variables".into()))?;
        if !p.is_identity() {
            generators.push(p);
        }
    }
    PermGroup::new(vars.len(), generators)
}

/// Orbit partition of the variables and of the clause nodes (features).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub variables: Vec<Vec<usize>>,
    pub features: Vec<Vec<usize>>,
    variable_labels: Vec<String>,
    feature_labels: Vec<String>,
}

impl OrbitReport {
    pub fn variable_label(&self, i: usize) -> &str {
        &self.variable_labels[i]
    }

    pub fn feature_label(&self, i: usize) -> &str {
        &self.feature_labels[i]
    }

    /// Variable classes as `{{a,b},{c}}`.
    pub fn format_variables(&self) -> String {
        format_classes(&self.variables, &self.variable_labels)
    }

    pub fn format_features(&self) -> String {
        format_classes(&self.features, &self.feature_labels)
    }
}

impl fmt::Display for OrbitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables {}", self.format_variables())?;
        write!(f, "features {}", self.format_features())
    }
}

fn format_classes(classes: &[Vec<usize>], labels: &[String]) -> String {
    let inner: Vec<String> = classes
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    format!("{{{}}}", inner.join(","))
}

fn strip_prefix(label: &str) -> String {
    label.strip_prefix("v_").unwrap_or(label).to_string()
}

/// Point orbits of `group` on the vertices of `g`, split into variable classes
/// and feature classes, each indexed by variable or clause number.
pub fn orbit_report(group: &PermGroup, g: &ColoredGraph) -> Result<OrbitReport> {
    if group.domain_size() != g.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: g.vertex_count(),
            found: group.domain_size(),
        });
    }
    let orbits = group.point_orbits();
    let vars = g.variable_vertices();
    let clauses = g.clause_vertices();
    let collect = |members: &[usize], index: &dyn Fn(VertexRole) -> usize| {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for &v in members {
            let k = orbits.class_of(v);
            match seen.iter().position(|&s| s == k) {
                Some(pos) => classes[pos].push(index(g.role(v))),
                None => {
                    seen.push(k);
                    classes.push(vec![index(g.role(v))]);
                }
            }
        }
        classes
    };
    let variables = collect(&vars, &|r| r.variable().expect("variable vertex"));
    let features = collect(&clauses, &|r| match r {
        VertexRole::Clause(c) => c,
        _ => unreachable!("clause vertex"),
    });
    Ok(OrbitReport {
        variables,
        features,
        variable_labels: vars.iter().map(|&v| strip_prefix(g.label(v))).collect(),
        feature_labels: clauses.iter().map(|&v| strip_prefix(g.label(v))).collect(),
    })
}
