//! Walk-regularity certification.
//!
//! A graph is walk-regular when every power of its adjacency matrix has a
//! constant diagonal. It suffices to check the powers `1..=k`, where `k` is
//! the number of distinct nonzero adjacency eigenvalues: the closed-walk
//! differences between two vertices solve a homogeneous system whose matrix
//! has rows `(λ_1^p, ..., λ_k^p)` and whose determinant is
//! `λ_1⋯λ_k ∏_{i>j}(λ_i − λ_j) ≠ 0`.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::linalg::{eigh_symmetric, integer_power_diagonals};
use crate::matrix::DenseMatrix;

/// Relative tolerance for grouping equal adjacency eigenvalues.
pub const DEFAULT_MULTIPLICITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub power: usize,
    /// 0-based vertex pair with differing closed-walk counts.
    pub vertices: (usize, usize),
    pub counts: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkRegularityReport {
    pub is_walk_regular: bool,
    /// Distinct nonzero adjacency eigenvalues; absent for the definition path.
    pub distinct_nonzero_eigenvalues: Option<usize>,
    /// `(p, diag(A^p))` for every power examined.
    pub checked_powers: Vec<(usize, Vec<i64>)>,
    pub first_violation: Option<Violation>,
}

/// Certifies walk-regularity by checking `diag(A^p)` for `p = 1..=k`.
pub fn is_walk_regular(g: &Graph) -> Result<WalkRegularityReport> {
    is_walk_regular_with_tol(g, DEFAULT_MULTIPLICITY_TOL)
}

pub fn is_walk_regular_with_tol(g: &Graph, multiplicity_tol: f64) -> Result<WalkRegularityReport> {
    let a = g.adjacency_matrix();
    let spectrum = eigh_symmetric(&a)?;
    let k = spectrum.distinct_nonzero(multiplicity_tol).len();
    let mut report = census(&a, k)?;
    report.distinct_nonzero_eigenvalues = Some(k);
    Ok(report)
}

/// Definition-based check of `diag(A^p)` for `p = 1..=p_max`. This is an
/// oracle for [`is_walk_regular`], not a certificate, when `p_max < n`.
pub fn is_walk_regular_definition(g: &Graph, p_max: usize) -> Result<WalkRegularityReport> {
    if p_max == 0 {
        return Err(crate::Error::InvalidArgument("p_max must be at least 1".into()));
    }
    census(&g.adjacency_matrix(), p_max)
}

fn census(a: &DenseMatrix, p_max: usize) -> Result<WalkRegularityReport> {
    let diags = integer_power_diagonals(a, p_max)?;
    let mut first_violation = None;
    for (idx, d) in diags.iter().enumerate() {
        if let Some(j) = d.iter().position(|&x| x != d[0]) {
            first_violation = Some(Violation {
                power: idx + 1,
                vertices: (0, j),
                counts: (d[0], d[j]),
            });
            break;
        }
    }
    Ok(WalkRegularityReport {
        is_walk_regular: first_violation.is_none(),
        distinct_nonzero_eigenvalues: None,
        checked_powers: diags.into_iter().enumerate().map(|(i, d)| (i + 1, d)).collect(),
        first_violation,
    })
}

/// Whether the diagonal of `m` is constant within `tol`, with its spread
/// `max − min`.
pub fn equal_diagonal_check(m: &DenseMatrix, tol: f64) -> (bool, f64) {
    let d = m.diagonal();
    if d.is_empty() {
        return (true, 0.0);
    }
    let (lo, hi) = d
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let spread = hi - lo;
    (spread <= tol, spread)
}
