//! Partially weighted clause sets and the `wcnf` text format.
//!
//! ```text
//! c two soft clauses sharing a negated literal
//! c name 1 a
//! c name 2 b
//! c name 3 c
//! p wcnf 3 2
//! 0.5 1 -3 0
//! 0.5 2 -3 0
//! e 1 1
//! ```
//!
//! Clause lines are `<weight|H> <±var>... 0` with 1-based variables; `H` marks
//! a hard clause. `e <var> <0|1>` fixes evidence. Comment lines of the form
//! `c name <var> <label>` attach display labels to variables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::models::graph::column_of;
use crate::perm::{Permutation, State};
use crate::{Error, Result};

/// Sorted clauses with weight keys, then sorted evidence.
pub type CanonicalKey = (Vec<(Vec<Literal>, WeightKey)>, Vec<(usize, bool)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: usize) -> Self {
        Literal {
            variable,
            negated: false,
        }
    }

    pub fn neg(variable: usize) -> Self {
        Literal {
            variable,
            negated: true,
        }
    }

    pub fn is_satisfied_by(&self, x: &State) -> bool {
        x.get(self.variable) != self.negated
    }
}

/// Clause weight: a finite real for soft clauses, `Hard` for `w = ∞`.
#[derive(Clone, Copy, Debug)]
pub enum Weight {
    Soft(f64),
    Hard,
}

/// Exact identity of a weight (bit pattern for soft weights).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightKey {
    Soft(u64),
    Hard,
}

impl Weight {
    pub fn key(&self) -> WeightKey {
        match *self {
            Weight::Soft(w) => WeightKey::Soft(w.to_bits()),
            Weight::Hard => WeightKey::Hard,
        }
    }

    pub fn is_hard(&self) -> bool {
        matches!(self, Weight::Hard)
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedClause {
    pub literals: Vec<Literal>,
    pub weight: Weight,
}

impl WeightedClause {
    pub fn is_satisfied_by(&self, x: &State) -> bool {
        self.literals.iter().any(|l| l.is_satisfied_by(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedClauseSet {
    variable_names: Vec<String>,
    clauses: Vec<WeightedClause>,
    evidence: BTreeMap<usize, bool>,
}

impl WeightedClauseSet {
    pub fn new(variable_names: Vec<String>) -> Self {
        WeightedClauseSet {
            variable_names,
            clauses: Vec::new(),
            evidence: BTreeMap::new(),
        }
    }

    /// Variables labelled `1..=n` as in DIMACS files.
    pub fn with_numbered_variables(n: usize) -> Self {
        WeightedClauseSet::new((1..=n).map(|i| i.to_string()).collect())
    }

    /// `{(a ∨ ¬c, 0.5), (b ∨ ¬c, 0.5)}`.
    pub fn twin_clauses() -> Self {
        let mut s = WeightedClauseSet::new(vec!["a".into(), "b".into(), "c".into()]);
        s.add_clause(vec![Literal::pos(0), Literal::neg(2)], Weight::Soft(0.5))
            .expect("valid clause");
        s.add_clause(vec![Literal::pos(1), Literal::neg(2)], Weight::Soft(0.5))
            .expect("valid clause");
        s
    }

    pub fn add_clause(&mut self, literals: Vec<Literal>, weight: Weight) -> Result<()> {
        for (i, l) in literals.iter().enumerate() {
            if l.variable >= self.num_vars() {
                return Err(Error::Invalid(format!(
                    "literal on variable {} outside 0..{}",
                    l.variable,
                    self.num_vars()
                )));
            }
            if literals[..i].contains(l) {
                return Err(Error::Invalid(format!("duplicate literal on variable {}", l.variable)));
            }
        }
        if let Weight::Soft(w) = weight {
            if !w.is_finite() {
                return Err(Error::Invalid(format!("soft weight must be finite, got {w}")));
            }
        }
        self.clauses.push(WeightedClause { literals, weight });
        Ok(())
    }

    pub fn set_evidence(&mut self, variable: usize, value: bool) -> Result<()> {
        if variable >= self.num_vars() {
            return Err(Error::Invalid(format!("evidence on unknown variable {variable}")));
        }
        self.evidence.insert(variable, value);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.variable_names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn clauses(&self) -> &[WeightedClause] {
        &self.clauses
    }

    pub fn evidence(&self) -> &BTreeMap<usize, bool> {
        &self.evidence
    }

    /// Renames variables through `sigma`: every literal on `v` becomes a literal
    /// on `sigma(v)` with the same sign. Clause order and names are kept.
    pub fn permute_variables(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.num_vars() {
            return Err(Error::SizeMismatch {
                expected: self.num_vars(),
                found: sigma.len(),
            });
        }
        let clauses = self
            .clauses
            .iter()
            .map(|c| WeightedClause {
                literals: c
                    .literals
                    .iter()
                    .map(|l| Literal {
                        variable: sigma.image(l.variable),
                        negated: l.negated,
                    })
                    .collect(),
                weight: c.weight,
            })
            .collect();
        let evidence = self.evidence.iter().map(|(&v, &b)| (sigma.image(v), b)).collect();
        Ok(WeightedClauseSet {
            variable_names: self.variable_names.clone(),
            clauses,
            evidence,
        })
    }

    /// Order-independent identity of the weighted clause multiset and evidence.
    pub fn canonical_key(&self) -> CanonicalKey {
        let mut clauses: Vec<(Vec<Literal>, WeightKey)> = self
            .clauses
            .iter()
            .map(|c| {
                let mut lits = c.literals.clone();
                lits.sort();
                (lits, c.weight.key())
            })
            .collect();
        clauses.sort();
        (clauses, self.evidence.iter().map(|(&v, &b)| (v, b)).collect())
    }

    /// True iff `sigma` maps this clause set (with evidence) onto itself.
    pub fn is_symmetry(&self, sigma: &Permutation) -> bool {
        match self.permute_variables(sigma) {
            Ok(mapped) => mapped.canonical_key() == self.canonical_key(),
            Err(_) => false,
        }
    }

    pub fn parse_wcnf(text: &str) -> Result<Self> {
        let mut set: Option<WeightedClauseSet> = None;
        let mut declared_clauses = 0;
        let mut names: Vec<(usize, usize, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "c" => {
                    if words.len() == 4 && words[1] == "name" {
                        let var = words[2].parse::<usize>().map_err(|_| {
                            Error::parse(line_no, column_of(raw, words[2]), "expected a variable number")
                        })?;
                        names.push((line_no, var, words[3].to_string()));
                    }
                }
                "p" => {
                    if set.is_some() {
                        return Err(Error::parse(line_no, 1, "duplicate problem line"));
                    }
                    if words.len() != 4 || words[1] != "wcnf" {
                        return Err(Error::parse(line_no, 1, "expected 'p wcnf <vars> <clauses>'"));
                    }
                    let n = crate::models::graph::parse_usize(words[2], line_no, raw)?;
                    declared_clauses = crate::models::graph::parse_usize(words[3], line_no, raw)?;
                    set = Some(WeightedClauseSet::with_numbered_variables(n));
                }
                "e" => {
                    let s = set
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, 1, "evidence before problem line"))?;
                    if words.len() != 3 {
                        return Err(Error::parse(line_no, 1, "expected 'e <var> <0|1>'"));
                    }
                    let var = parse_var(words[1], s.num_vars(), line_no, raw)?;
                    let value = match words[2] {
                        "0" => false,
                        "1" => true,
                        w => {
                            return Err(Error::parse(
                                line_no,
                                column_of(raw, w),
                                "evidence value must be 0 or 1",
                            ))
                        }
                    };
                    s.set_evidence(var, value)?;
                }
                _ => {
                    let s = set
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, 1, "clause before problem line"))?;
                    let weight = match words[0] {
                        "H" | "h" => Weight::Hard,
                        w => match w.parse::<f64>() {
                            Ok(v) if v.is_finite() => Weight::Soft(v),
                            _ => return Err(Error::parse(line_no, 1, format!("invalid weight {w:?}"))),
                        },
                    };
                    if words.last() != Some(&"0") || words.len() < 2 {
                        return Err(Error::parse(line_no, raw.len().max(1), "clause must end with 0"));
                    }
                    let mut literals = Vec::new();
                    for w in &words[1..words.len() - 1] {
                        let lit: i64 = w
                            .parse()
                            .map_err(|_| Error::parse(line_no, column_of(raw, w), format!("invalid literal {w:?}")))?;
                        if lit == 0 {
                            return Err(Error::parse(line_no, column_of(raw, w), "0 inside clause"));
                        }
                        let var = parse_var(&lit.unsigned_abs().to_string(), s.num_vars(), line_no, raw)?;
                        let literal = Literal {
                            variable: var,
                            negated: lit < 0,
                        };
                        if literals.contains(&literal) {
                            return Err(Error::parse(
                                line_no,
                                column_of(raw, w),
                                format!("duplicate literal {w}"),
                            ));
                        }
                        literals.push(literal);
                    }
                    s.add_clause(literals, weight)
                        .map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
                }
            }
        }
        let mut s = set.ok_or_else(|| Error::parse(1, 1, "missing 'p wcnf' line"))?;
        if s.clauses.len() != declared_clauses {
            return Err(Error::parse(
                1,
                1,
                format!("header declares {declared_clauses} clauses, found {}", s.clauses.len()),
            ));
        }
        for (line_no, var, label) in names {
            if var == 0 || var > s.num_vars() {
                return Err(Error::parse(line_no, 8, format!("name for unknown variable {var}")));
            }
            s.variable_names[var - 1] = label;
        }
        for (i, name) in s.variable_names.iter().enumerate() {
            if s.variable_names[..i].contains(name) {
                return Err(Error::parse(1, 1, format!("variable label {name:?} used twice")));
            }
        }
        Ok(s)
    }

    pub fn to_wcnf(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.variable_names.iter().enumerate() {
            if *name != (i + 1).to_string() {
                let _ = writeln!(out, "c name {} {}", i + 1, name);
            }
        }
        let _ = writeln!(out, "p wcnf {} {}", self.num_vars(), self.clauses.len());
        for c in &self.clauses {
            match c.weight {
                Weight::Soft(w) => {
                    let _ = write!(out, "{w:?}");
                }
                Weight::Hard => out.push('H'),
            }
            for l in &c.literals {
                let sign = if l.negated { "-" } else { "" };
                let _ = write!(out, " {sign}{}", l.variable + 1);
            }
            out.push_str(" 0\n");
        }
        for (&v, &b) in &self.evidence {
            let _ = writeln!(out, "e {} {}", v + 1, u8::from(b));
        }
        out
    }
}

fn parse_var(word: &str, n: usize, line_no: usize, raw: &str) -> Result<usize> {
    match word.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        _ => Err(Error::parse(
            line_no,
            column_of(raw, word),
            format!("variable {word:?} outside 1..={n}"),
        )),
    }
}
