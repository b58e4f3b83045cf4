use nalgebra::DMatrix;

use crate::chains::TransitionMatrix;
use crate::models::ExactDistribution;
use crate::{Error, Result};

/// Largest step count searched by [`exact_mixing_time`].
pub const MIXING_TIME_CAP: u64 = 1_000_000;

/// `max_x d_tv(P^t(x, ·), π)` for the matrix power `pt = P^t`.
pub fn worst_case_distance(pt: &DMatrix<f64>, pi: &[f64]) -> f64 {
    pt.row_iter()
        .map(|row| 0.5 * row.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Smallest `T` with `max_x d_tv(P^T(x, ·), π) ≤ eps`. The worst-case distance
/// is non-increasing in `t`, so `T` is found by repeated squaring followed by
/// a binary search assembled from the stored squares.
pub fn exact_mixing_time(p: &TransitionMatrix, pi: &ExactDistribution, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let target: Vec<f64> = p.states().iter().map(|x| pi.prob(x)).collect();
    let n = p.len();
    let identity = DMatrix::<f64>::identity(n, n);
    if worst_case_distance(&identity, &target) <= eps {
        return Ok(0);
    }
    // squares[k] = P^(2^k)
    let mut squares = vec![p.entries().clone()];
    while worst_case_distance(squares.last().expect("nonempty"), &target) > eps {
        if 1u64 << squares.len() > MIXING_TIME_CAP {
            return Err(Error::NotConverged(MIXING_TIME_CAP));
        }
        let last = squares.last().expect("nonempty");
        squares.push(last * last);
    }
    // d(2^(k-1)) > eps >= d(2^k): find the crossing in (2^(k-1), 2^k].
    let k = squares.len() - 1;
    if k == 0 {
        return Ok(1);
    }
    let mut low = 1u64 << (k - 1);
    let mut low_power = squares[k - 1].clone();
    for bit in (0..k - 1).rev() {
        let candidate = &low_power * &squares[bit];
        if worst_case_distance(&candidate, &target) > eps {
            low += 1 << bit;
            low_power = candidate;
        }
    }
    Ok(low + 1)
}

/// Per-variable marginals of an exact distribution.
pub fn exact_marginals(pi: &ExactDistribution) -> Vec<f64> {
    pi.marginals()
}
