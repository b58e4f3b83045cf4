use std::collections::HashMap;

use crate::models::ExactDistribution;
use crate::perm::State;
use crate::{Error, Result};

/// Half the L1 distance between two distributions over the same universe.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::UniverseMismatch(format!("{} vs {} states", p.len(), q.len())));
    }
    let sum: f64 = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * sum).min(1.0))
}

/// Frequencies of `samples`, aligned with the states of `universe`.
pub fn empirical_distribution(samples: &[State], universe: &ExactDistribution) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut counter = SampleCounter::new(universe);
    for x in samples {
        counter.record(x)?;
    }
    Ok(counter.frequencies())
}

/// Running visit counts over a fixed universe.
#[derive(Clone, Debug)]
pub struct SampleCounter {
    index: HashMap<State, usize>,
    counts: Vec<u64>,
    total: u64,
}

impl SampleCounter {
    pub fn new(universe: &ExactDistribution) -> Self {
        SampleCounter {
            index: universe
                .states()
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect(),
            counts: vec![0; universe.len()],
            total: 0,
        }
    }

    pub fn record(&mut self, x: &State) -> Result<()> {
        let i = *self
            .index
            .get(x)
            .ok_or_else(|| Error::UniverseMismatch(x.to_string()))?;
        self.counts[i] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// TV distance from the empirical frequencies to `pi`.
    pub fn tv_to(&self, pi: &ExactDistribution) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::EmptySamples);
        }
        let n = self.total as f64;
        if pi.len() != self.counts.len() {
            return Err(Error::UniverseMismatch(format!(
                "{} vs {} states",
                pi.len(),
                self.counts.len()
            )));
        }
        let sum: f64 = self
            .counts
            .iter()
            .zip(pi.probs())
            .map(|(&c, &p)| (c as f64 / n - p).abs())
            .sum();
        Ok((0.5 * sum).min(1.0))
    }
}
