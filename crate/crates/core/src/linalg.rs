//! Real symmetric eigendecomposition and the quantities built on it:
//! Moore-Penrose inverses, singular values, spectral norms, numerical rank
//! and exact walk-count powers.
//!
//! All scalars are real. Every matrix the graph-frame constructions touch is
//! real symmetric, so a real orthogonal eigenbasis always exists and results
//! over the complex field embed unchanged.

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};

/// Relative off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative zero threshold for eigenvalues, scaled by `max(1, max|λ|)`.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues in non-increasing order with matching orthonormal
/// eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct SymmetricSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
    /// Absolute threshold below which |λ| counts as zero.
    pub zero_tol: f64,
}

impl SymmetricSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_zero(&self, lambda: f64) -> bool {
        lambda.abs() <= self.zero_tol
    }

    /// Number of eigenvalues above the zero threshold in absolute value.
    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| !self.is_zero(l)).count()
    }

    /// M diag(λ) Mᵀ.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.apply_spectral_map(|l| l)
    }

    /// M diag(f(λ)) Mᵀ.
    pub fn apply_spectral_map(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let m = &self.eigenvectors;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for (k, &w) in mapped.iter().enumerate() {
                    if w != 0.0 {
                        acc += m[(i, k)] * w * m[(j, k)];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }

    /// Distinct eigenvalues above the zero threshold, grouping values that
    /// lie within `rel_tol * max|λ|` of the previous group representative.
    pub fn distinct_nonzero(&self, rel_tol: f64) -> Vec<f64> {
        let scale = self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        let tol = rel_tol * scale;
        let mut groups: Vec<f64> = Vec::new();
        for &l in &self.eigenvalues {
            if self.is_zero(l) {
                continue;
            }
            match groups.last() {
                Some(&g) if (g - l).abs() <= tol => {}
                _ => groups.push(l),
            }
        }
        groups
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized by averaging first. Output is deterministic:
/// eigenvalues non-increasing (stable on exact ties) and each eigenvector
/// flipped so its largest-magnitude entry is positive, lowest index winning
/// ties.
pub fn eigh_symmetric(m: &DenseMatrix) -> Result<SymmetricSpectrum> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let target = JACOBI_TOL * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let raw: Vec<f64> = a.diagonal();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (jj, &j) in order.iter().enumerate() {
        let mut col = v.column(j);
        let mut pivot = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvectors.set_column(jj, &col);
    }
    let max_abs = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    Ok(SymmetricSpectrum {
        eigenvalues,
        eigenvectors,
        zero_tol: DEFAULT_ZERO_TOL * max_abs.max(1.0),
    })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

// One Jacobi rotation annihilating a[p][q]; accumulates into v.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Moore-Penrose inverse of a symmetric matrix: invert the eigenvalues
/// above the zero threshold and drop the rest.
pub fn moore_penrose(m: &DenseMatrix) -> Result<DenseMatrix> {
    let spectrum = eigh_symmetric(m)?;
    Ok(pinv_from_spectrum(&spectrum))
}

pub fn pinv_from_spectrum(spectrum: &SymmetricSpectrum) -> DenseMatrix {
    let tol = spectrum.zero_tol;
    spectrum.apply_spectral_map(|l| if l.abs() <= tol { 0.0 } else { 1.0 / l })
}

/// Singular values in non-increasing order, computed by one-sided
/// (Hestenes) Jacobi. Returns `min(rows, cols)` values.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    let work = if m.cols() > m.rows() { m.transpose() } else { m.clone() };
    let (rows, cols) = work.shape();
    if cols == 0 || rows == 0 {
        return Ok(Vec::new());
    }
    let mut columns: Vec<Vec<f64>> = (0..cols).map(|j| work.column(j)).collect();
    let eps = (rows.max(2) as f64) * f64::EPSILON;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        let mut worst: f64 = 0.0;
        // columns at roundoff level relative to the largest are treated as zero
        let negligible = columns.iter().map(|c| dot(c, c)).fold(0.0, f64::max) * eps * eps;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha = dot(&columns[i], &columns[i]);
                let beta = dot(&columns[j], &columns[j]);
                let gamma = dot(&columns[i], &columns[j]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                worst = worst.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = columns.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: worst });
        }
    }
    let mut sv: Vec<f64> = columns.iter().map(|c| dot(c, c).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Largest singular value, as the square root of the top eigenvalue of the
/// smaller Gram matrix.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    let gram = if m.cols() <= m.rows() {
        m.transpose().matmul(m)?
    } else {
        m.matmul(&m.transpose())?
    };
    let spectrum = eigh_symmetric(&gram)?;
    Ok(spectrum.eigenvalues[0].max(0.0).sqrt())
}

/// Number of singular values strictly above `tol * max(1, σ_max)`.
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let Some(&top) = sv.first() else {
        return Ok(0);
    };
    let threshold = tol * top.max(1.0);
    Ok(sv.iter().filter(|&&s| s > threshold).count())
}

/// Diagonal of `m^p`.
///
/// Integral inputs go through exact 64-bit arithmetic and fail with
/// [`Error::Overflow`] instead of wrapping; other inputs use floating
/// multiplication.
pub fn matrix_power_diagonal(m: &DenseMatrix, p: usize) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("power of a {}x{} matrix", m.rows(), m.cols())));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    if m.is_integral() {
        let diags = integer_power_diagonals(m, p)?;
        return Ok(diags[p - 1].iter().map(|&x| x as f64).collect());
    }
    let mut acc = m.clone();
    for _ in 1..p {
        acc = acc.matmul(m)?;
    }
    Ok(acc.diagonal())
}

/// Diagonals of `m^1, ..., m^p_max` in exact integer arithmetic. `m` must
/// be square with integral entries.
pub fn integer_power_diagonals(m: &DenseMatrix, p_max: usize) -> Result<Vec<Vec<i64>>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("power of a {}x{} matrix", m.rows(), m.cols())));
    }
    if !m.is_integral() {
        return Err(Error::InvalidArgument("matrix has non-integral entries".into()));
    }
    let n = m.rows();
    let base: Vec<i64> = m.as_slice().iter().map(|&x| x as i64).collect();
    let mut power = base.clone();
    let mut diags = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        if p > 1 {
            let mut next = vec![0_i64; n * n];
            for i in 0..n {
                for k in 0..n {
                    let a = power[i * n + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let b = base[k * n + j];
                        if b == 0 {
                            continue;
                        }
                        let term = a.checked_mul(b).ok_or(Error::Overflow { power: p })?;
                        next[i * n + j] =
                            next[i * n + j].checked_add(term).ok_or(Error::Overflow { power: p })?;
                    }
                }
            }
            power = next;
        }
        diags.push((0..n).map(|i| power[i * n + i]).collect());
    }
    Ok(diags)
}

/// Closed-form determinant of the matrix with rows `(a_1^p, ..., a_n^p)`
/// for `p = 1..n`: `a_1⋯a_n · ∏_{i>j} (a_i − a_j)`.
pub fn generalized_vandermonde_det(a: &[f64]) -> f64 {
    let mut det: f64 = a.iter().product();
    for i in 0..a.len() {
        for j in 0..i {
            det *= a[i] - a[j];
        }
    }
    det
}
