//! Spark of a frame: the size of its smallest linearly dependent subset.
//!
//! Brute force is exponential, so it runs only under an enumeration guard.
//! Graph frames have a closed form: the smallest component size.

use rayon::prelude::*;

use crate::combin::{binomial, unrank};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::graph::Graph;
use crate::linalg::numerical_rank;

/// Maximum number of subsets brute-force spark may examine.
pub const SPARK_GUARD: u128 = 2_000_000;
/// Relative singular-value threshold for subset rank.
pub const SPARK_RANK_TOL: f64 = 1e-8;

/// Smallest `s` such that some `s` frame vectors are linearly dependent, or
/// `k + 1` when no dependent subset of size `≤ k` exists.
pub fn spark(f: &Frame) -> Result<usize> {
    let (k, n) = (f.dim(), f.count());
    let max_size = (k + 1).min(n);
    let needed: u128 = (1..=max_size).map(|s| binomial(n, s)).sum();
    if needed > SPARK_GUARD {
        return Err(Error::GuardExceeded {
            needed,
            limit: SPARK_GUARD,
        });
    }
    for s in 1..=max_size {
        let dependent = (0..binomial(n, s)).into_par_iter().any(|rank| {
            let cols = unrank(n, s, rank);
            let sub = f.synthesis().select_columns(&cols);
            // a solver failure counts as "not shown dependent"
            numerical_rank(&sub, SPARK_RANK_TOL).is_ok_and(|r| r < s)
        });
        if dependent {
            return Ok(s);
        }
    }
    Ok(k + 1)
}

pub fn is_full_spark(f: &Frame) -> Result<bool> {
    Ok(spark(f)? == f.dim() + 1)
}

/// Spark of any frame generated by `g`: the smallest component size.
pub fn spark_via_components(g: &Graph) -> Result<usize> {
    if let Some(c) = g.components().iter().find(|c| c.len() == 1) {
        return Err(Error::IsolatedVertex(c[0] + 1));
    }
    Ok(g.components().iter().map(Vec::len).min().expect("graph has a vertex"))
}
