//! Cycle notation and the generating-set text format.
//!
//! A permutation is written as a product of parenthesised cycles with
//! whitespace-separated point names, e.g. `(a c)(d f)(g i)`; points that do not
//! occur are fixed and `()` (or the empty string) is the identity.
//!
//! A generating set file looks like
//!
//! ```text
//! domain 9
//! name 0 a
//! name 2 c
//! (a c)(d f)(g i)
//! ```
//!
//! Unnamed points are referred to by their 0-based index.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::Permutation;
use crate::{Error, Result};

/// Label table for the points of a permutation domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointNames {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl PointNames {
    /// Points named by their decimal index.
    pub fn numeric(n: usize) -> Self {
        PointNames::new((0..n).map(|i| i.to_string()).collect()).expect("numeric labels are unique")
    }

    /// Letters `a`, `b`, ... for up to 26 points, numeric labels otherwise.
    pub fn alphabetic(n: usize) -> Self {
        if n > 26 {
            return PointNames::numeric(n);
        }
        PointNames::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()).expect("letters are unique")
    }

    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
                return Err(Error::Invalid(format!("point label {label:?} is not a single token")));
            }
            if lookup.insert(label.clone(), i).is_some() {
                return Err(Error::Invalid(format!("point label {label:?} used twice")));
            }
        }
        Ok(PointNames { labels, lookup })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    fn is_numeric(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
    }

    /// Parses cycle notation over this domain. Errors carry line 1 and the
    /// 1-based column of the offending character.
    pub fn parse(&self, text: &str) -> Result<Permutation> {
        self.parse_at(text, 1)
    }

    fn parse_at(&self, text: &str, line: usize) -> Result<Permutation> {
        let n = self.len();
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut k = 0;
        let col =
            |k: usize, chars: &[(usize, char)]| -> usize { chars.get(k).map_or(text.chars().count() + 1, |_| k + 1) };
        while k < chars.len() {
            let (_, ch) = chars[k];
            if ch.is_whitespace() {
                k += 1;
                continue;
            }
            if ch != '(' {
                return Err(Error::parse(
                    line,
                    col(k, &chars),
                    format!("expected '(' but found {ch:?}"),
                ));
            }
            k += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                while k < chars.len() && chars[k].1.is_whitespace() {
                    k += 1;
                }
                if k >= chars.len() {
                    return Err(Error::parse(line, col(k, &chars), "unclosed '('"));
                }
                match chars[k].1 {
                    ')' => {
                        k += 1;
                        break;
                    }
                    '(' => return Err(Error::parse(line, col(k, &chars), "nested '('")),
                    _ => {
                        let start = k;
                        while k < chars.len() && !chars[k].1.is_whitespace() && chars[k].1 != '(' && chars[k].1 != ')' {
                            k += 1;
                        }
                        let token: String = chars[start..k].iter().map(|&(_, c)| c).collect();
                        let point = self
                            .index_of(&token)
                            .ok_or_else(|| Error::parse(line, start + 1, format!("unknown point {token:?}")))?;
                        if used[point] {
                            return Err(Error::parse(line, start + 1, format!("point {token:?} repeated")));
                        }
                        used[point] = true;
                        cycle.push(point);
                    }
                }
            }
            for (i, &a) in cycle.iter().enumerate() {
                images[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    /// Formats `p` in cycle notation using these labels; the identity is `()`.
    pub fn format(&self, p: &Permutation) -> String {
        let cycles = p.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for cycle in cycles {
            out.push('(');
            for (i, &a) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(self.label(a));
            }
            out.push(')');
        }
        out
    }
}

/// Parses cycle notation over `n` numerically named points.
pub fn parse_cycles(text: &str, n: usize) -> Result<Permutation> {
    PointNames::numeric(n).parse(text)
}

/// A domain with its name table and a list of generators.
#[derive(Clone, Debug)]
pub struct GeneratorFile {
    pub names: PointNames,
    pub generators: Vec<Permutation>,
}

pub fn parse_generator_file(text: &str) -> Result<GeneratorFile> {
    let mut domain: Option<usize> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut names: Option<PointNames> = None;
    let mut generators = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("domain") => {
                if domain.is_some() {
                    return Err(Error::parse(line_no, 1, "duplicate 'domain' line"));
                }
                let n: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, 8, "expected 'domain <n>'"))?;
                domain = Some(n);
                labels = (0..n).map(|i| i.to_string()).collect();
            }
            Some("name") => {
                let n = domain.ok_or_else(|| Error::parse(line_no, 1, "'name' before 'domain'"))?;
                if names.is_some() {
                    return Err(Error::parse(line_no, 1, "'name' after the first permutation"));
                }
                let index: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .filter(|&i| i < n)
                    .ok_or_else(|| Error::parse(line_no, 6, "expected 'name <index> <label>' with index in range"))?;
                let label = words.next().ok_or_else(|| Error::parse(line_no, 6, "missing label"))?;
                labels[index] = label.to_string();
            }
            _ => {
                if domain.is_none() {
                    return Err(Error::parse(line_no, 1, "expected 'domain <n>' header"));
                }
                if names.is_none() {
                    names = Some(PointNames::new(labels.clone()).map_err(|e| Error::parse(line_no, 1, e.to_string()))?);
                }
                let table = names.as_ref().expect("set above");
                generators.push(table.parse_at(raw, line_no)?);
            }
        }
    }
    let domain = domain.ok_or_else(|| Error::parse(1, 1, "missing 'domain <n>' header"))?;
    let names = match names {
        Some(n) => n,
        None => PointNames::new(labels).map_err(|e| Error::parse(1, 1, e.to_string()))?,
    };
    debug_assert_eq!(names.len(), domain);
    Ok(GeneratorFile { names, generators })
}

pub fn write_generator_file(names: &PointNames, generators: &[Permutation]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "domain {}", names.len());
    if !names.is_numeric() {
        for (i, label) in names.labels().iter().enumerate() {
            if *label != i.to_string() {
                let _ = writeln!(out, "name {i} {label}");
            }
        }
    }
    for g in generators {
        let _ = writeln!(out, "{}", names.format(g));
    }
    out
}
