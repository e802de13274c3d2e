//! Fixed-order reductions.
//!
//! Every norm, inner product and residual maximum in the crate goes through
//! these helpers so that results are bitwise reproducible regardless of how
//! the producing loop was scheduled.

use crate::linalg::C64;

const LEAF: usize = 32;

/// Pairwise (fixed binary tree) summation.
pub fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Pairwise summation of complex values.
pub fn pairwise_c(xs: &[C64]) -> C64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(C64::new(0.0, 0.0), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_c(&xs[..mid]) + pairwise_c(&xs[mid..])
}

/// Maximum that propagates NaN instead of silently dropping it.
pub fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |acc: f64, x| {
        if x.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(x.abs())
        }
    })
}
