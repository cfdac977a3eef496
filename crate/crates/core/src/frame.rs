//! Frames generated by graphs.
//!
//! The Laplacian frame of a graph with `p` components has synthesis matrix
//! `diag(√λ_1, ..., √λ_k) M_1ᵀ`, where `λ_1 ≥ ... ≥ λ_k > 0` are the nonzero
//! Laplacian eigenvalues (`k = n − p`) and `M_1` holds their eigenvectors.
//! Its Gramian is the Laplacian itself and its frame operator is
//! `diag(λ_1, ..., λ_k)`.
//!
//! The frame is fixed only up to an orthogonal change of basis. Everything
//! this crate reports about it (norms, spark, erasure errors) is invariant
//! under that change; raw vectors are basis dependent.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eigh_symmetric, pinv_from_spectrum, SymmetricSpectrum, DEFAULT_ZERO_TOL};
use crate::matrix::{dot, norm, DenseMatrix};

/// Residual above which a claimed dual is rejected.
pub const DUALITY_TOL: f64 = 1e-8;
/// Gramian agreement required before searching for a unitary witness.
pub const GRAMIAN_TOL: f64 = 1e-8;
const WITNESS_TOL: f64 = 1e-7;

/// An ordered list of `n` vectors spanning a `k`-dimensional space, stored
/// as the columns of the `k × n` synthesis matrix.
#[derive(Clone, Debug)]
pub struct Frame {
    synthesis: DenseMatrix,
    frame_operator: DenseMatrix,
    gramian: DenseMatrix,
}

impl Frame {
    /// Wraps a synthesis matrix. Fails unless the columns span the space.
    pub fn new(synthesis: DenseMatrix) -> Result<Self> {
        let (k, n) = synthesis.shape();
        if k == 0 || n < k {
            return Err(Error::InvalidArgument(format!(
                "{n} vectors cannot span dimension {k}"
            )));
        }
        let frame_operator = synthesis.matmul(&synthesis.transpose())?;
        let gramian = synthesis.transpose().matmul(&synthesis)?;
        let spectrum = eigh_symmetric(&frame_operator)?;
        let smallest = spectrum.eigenvalues[k - 1];
        if smallest <= spectrum.zero_tol {
            return Err(Error::InvalidArgument(format!(
                "frame operator is singular (smallest eigenvalue {smallest:e}); vectors do not span"
            )));
        }
        Ok(Frame {
            synthesis,
            frame_operator,
            gramian,
        })
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        Self::new(DenseMatrix::from_columns(vectors)?)
    }

    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn count(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn synthesis(&self) -> &DenseMatrix {
        &self.synthesis
    }

    pub fn frame_operator(&self) -> &DenseMatrix {
        &self.frame_operator
    }

    pub fn gramian(&self) -> &DenseMatrix {
        &self.gramian
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.synthesis.column(i)
    }

    pub fn norms(&self) -> Vec<f64> {
        (0..self.count()).map(|i| norm(&self.vector(i))).collect()
    }

    /// Columns `S⁻¹ f_i`, with `S⁻¹` obtained from the eigendecomposition
    /// of the frame operator.
    pub fn canonical_dual_matrix(&self) -> Result<DenseMatrix> {
        let s_inv = pinv_from_spectrum(&eigh_symmetric(&self.frame_operator)?);
        s_inv.matmul(&self.synthesis)
    }

    /// Applies an orthogonal (or any) `k × k` map to every frame vector.
    pub fn transformed(&self, u: &DenseMatrix) -> Result<Frame> {
        Frame::new(u.matmul(&self.synthesis)?)
    }
}

/// A graph's Laplacian frame together with what it was built from.
#[derive(Clone, Debug)]
pub struct GraphFrameBundle {
    /// The graph as supplied.
    pub original: Graph,
    /// Component-contiguous relabeling of `original`; frame columns follow
    /// these labels.
    pub graph: Graph,
    /// `permutation[old] = new`.
    pub permutation: Vec<usize>,
    pub frame: Frame,
    pub spectrum: SymmetricSpectrum,
    /// `[start, end)` label ranges, one per component.
    pub component_ranges: Vec<(usize, usize)>,
}

impl GraphFrameBundle {
    pub fn component_count(&self) -> usize {
        self.component_ranges.len()
    }

    /// Component index of a (relabeled) vertex.
    pub fn component_of(&self, v: usize) -> usize {
        self.graph.component_of(v)
    }

    /// Reorders a per-vertex list from frame order to original labels.
    pub fn to_original_order<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.permutation.iter().map(|&new| values[new].clone()).collect()
    }

    /// Original label of a relabeled vertex.
    pub fn original_label(&self, new: usize) -> usize {
        self.permutation
            .iter()
            .position(|&p| p == new)
            .expect("permutation is a bijection")
    }

    /// `‖Gramian − L‖_max`.
    pub fn gramian_residual(&self) -> f64 {
        self.frame.gramian().max_abs_diff(&self.graph.laplacian_matrix())
    }
}

/// Builds the Laplacian frame of `g`.
///
/// Relabels by component first. Rejects edgeless graphs and isolated
/// vertices, whose frame vectors would vanish.
pub fn build_lg_frame(g: &Graph) -> Result<GraphFrameBundle> {
    build_lg_frame_with_tol(g, DEFAULT_ZERO_TOL)
}

/// [`build_lg_frame`] with a relative zero threshold for Laplacian
/// eigenvalues, scaled by `max(1, λ_max)`.
pub fn build_lg_frame_with_tol(g: &Graph, zero_tol: f64) -> Result<GraphFrameBundle> {
    if !(zero_tol > 0.0 && zero_tol.is_finite()) {
        return Err(Error::InvalidArgument("zero tolerance must be positive".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    if let Some(c) = g.components().iter().find(|c| c.len() == 1) {
        return Err(Error::IsolatedVertex(c[0] + 1));
    }
    let (graph, permutation) = g.relabel_by_component();
    let mut spectrum = eigh_symmetric(&graph.laplacian_matrix())?;
    let scale = spectrum.eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    spectrum.zero_tol = zero_tol * scale;
    let k = graph.vertex_count() - graph.component_count();
    let rank = spectrum.rank();
    if rank != k {
        return Err(Error::RankMismatch { expected: k, found: rank });
    }
    let frame = frame_from_spectrum(&spectrum, k)?;
    let component_ranges = graph.component_ranges();
    Ok(GraphFrameBundle {
        original: g.clone(),
        graph,
        permutation,
        frame,
        spectrum,
        component_ranges,
    })
}

/// `diag(√λ_1..√λ_k) M_1ᵀ` from the leading `k` eigenpairs.
pub fn frame_from_spectrum(spectrum: &SymmetricSpectrum, k: usize) -> Result<Frame> {
    let n = spectrum.dim();
    let mut b = DenseMatrix::zeros(k, n);
    for j in 0..k {
        let scale = spectrum.eigenvalues[j].max(0.0).sqrt();
        for i in 0..n {
            b[(j, i)] = scale * spectrum.eigenvectors[(i, j)];
        }
    }
    Frame::new(b)
}

/// A dual of a graph frame: canonical dual columns plus one shift per
/// component.
#[derive(Clone, Debug)]
pub struct DualCandidate {
    pub shifts: Vec<Vec<f64>>,
    /// `k × n`, column `i` is `h_i`.
    pub realized: DenseMatrix,
    pub duality_residual: f64,
}

pub fn canonical_dual(b: &GraphFrameBundle) -> Result<DualCandidate> {
    let zeros = vec![vec![0.0; b.frame.dim()]; b.component_count()];
    dual_family_member(b, &zeros)
}

/// `h_i = S⁻¹ f_i + ν_{c(i)}`. Every such family member is a dual because
/// the frame vectors of each component sum to zero; the identity is still
/// checked and a residual above [`DUALITY_TOL`] is an error.
pub fn dual_family_member(b: &GraphFrameBundle, shifts: &[Vec<f64>]) -> Result<DualCandidate> {
    let k = b.frame.dim();
    if shifts.len() != b.component_count() {
        return Err(Error::Shape(format!(
            "{} shifts for {} components",
            shifts.len(),
            b.component_count()
        )));
    }
    if let Some(bad) = shifts.iter().find(|s| s.len() != k) {
        return Err(Error::Shape(format!("shift of length {} in dimension {k}", bad.len())));
    }
    let mut realized = b.frame.canonical_dual_matrix()?;
    for i in 0..b.frame.count() {
        let shift = &shifts[b.component_of(i)];
        for (r, &s) in shift.iter().enumerate() {
            realized[(r, i)] += s;
        }
    }
    let residual = verify_dual(&b.frame, &realized)?;
    if residual > DUALITY_TOL {
        return Err(Error::DualityResidual(residual));
    }
    Ok(DualCandidate {
        shifts: shifts.to_vec(),
        realized,
        duality_residual: residual,
    })
}

/// `‖Σ_i h_i f_iᵀ − I‖_max`.
pub fn verify_dual(f: &Frame, h: &DenseMatrix) -> Result<f64> {
    if h.shape() != f.synthesis().shape() {
        return Err(Error::Shape(format!(
            "dual is {}x{}, frame is {}x{}",
            h.rows(),
            h.cols(),
            f.dim(),
            f.count()
        )));
    }
    let recon = h.matmul(&f.synthesis().transpose())?;
    Ok(recon.max_abs_diff(&DenseMatrix::identity(f.dim())))
}

/// Orthogonal `U` with `U f2_i = f1_i` for all `i`, when the two frames
/// share a Gramian.
///
/// `U` is the polar factor of `T1 T2ᵀ`; directions outside its range are
/// completed with the standard basis, in order.
pub fn unitary_equivalence_witness(f1: &Frame, f2: &Frame) -> Result<Option<DenseMatrix>> {
    if f1.synthesis().shape() != f2.synthesis().shape() {
        return Err(Error::Shape(format!(
            "frames of shape {:?} and {:?}",
            f1.synthesis().shape(),
            f2.synthesis().shape()
        )));
    }
    if f1.gramian().max_abs_diff(f2.gramian()) > GRAMIAN_TOL {
        return Ok(None);
    }
    let k = f1.dim();
    let cross = f1.synthesis().matmul(&f2.synthesis().transpose())?;
    let spectrum = eigh_symmetric(&cross.transpose().matmul(&cross)?)?;
    let q = &spectrum.eigenvectors;

    let mut left: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut right: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let sigma = spectrum.eigenvalues[j].max(0.0).sqrt();
        if spectrum.eigenvalues[j] <= spectrum.zero_tol {
            break;
        }
        let qj = q.column(j);
        let mut pj = cross.mul_vec(&qj)?;
        pj.iter_mut().for_each(|x| *x /= sigma);
        left.push(pj);
        right.push(qj);
    }
    for j in right.len()..k {
        right.push(q.column(j));
    }
    complete_orthonormal(&mut left, k);

    let mut u = DenseMatrix::zeros(k, k);
    for (p, qv) in left.iter().zip(&right) {
        for r in 0..k {
            for c in 0..k {
                u[(r, c)] += p[r] * qv[c];
            }
        }
    }
    let mapped = u.matmul(f2.synthesis())?;
    if mapped.max_abs_diff(f1.synthesis()) > WITNESS_TOL {
        return Ok(None);
    }
    Ok(Some(u))
}

// Extends an orthonormal list to `k` vectors using e_0, e_1, ... in order.
fn complete_orthonormal(basis: &mut Vec<Vec<f64>>, k: usize) {
    let mut t = 0;
    while basis.len() < k && t < k {
        let mut v = vec![0.0; k];
        v[t] = 1.0;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let len = norm(&v);
        if len > 1e-8 {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
        t += 1;
    }
}
