// Oracles and generators shared by the integration tests. Each oracle takes
// a route independent of the library code it checks.
#![allow(dead_code)]

use std::path::PathBuf;

use graphframe::fixtures;
use graphframe::{DenseMatrix, Frame, Graph};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(stem: &str) -> PathBuf {
    fixture_dir().join(format!("{stem}.edges"))
}

pub fn walk_regular_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("k3", fixtures::complete(3)),
        ("c4", fixtures::cycle(4)),
        ("petersen", fixtures::petersen()),
        ("k33", fixtures::complete_bipartite(3, 3)),
        ("two_triangles", fixtures::two_triangles()),
    ]
}

/// Exact determinant by fraction-free (Bareiss) elimination over the
/// rationals. Every f64 converts exactly.
pub fn bareiss_det(rows: &[Vec<f64>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_float(x).expect("finite")).collect())
        .collect();
    let mut sign = BigRational::one();
    let mut prev = BigRational::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigRational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigRational::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigRational::one();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("representable")
}

/// Number of closed walks of length `p` from `v`, by explicit enumeration.
pub fn closed_walks(g: &Graph, v: usize, p: usize) -> u64 {
    fn go(g: &Graph, at: usize, target: usize, left: usize) -> u64 {
        if left == 0 {
            return u64::from(at == target);
        }
        g.neighbors(at).iter().map(|&w| go(g, w, target, left - 1)).sum()
    }
    go(g, v, v, p)
}

/// `‖A‖₂` by power iteration on `AᵀA` from a fixed start.
pub fn power_iteration_norm(a: &DenseMatrix) -> f64 {
    let ata = a.transpose().matmul(a).unwrap();
    let n = ata.rows();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let y = ata.mul_vec(&x).unwrap();
        let len = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len == 0.0 {
            return 0.0;
        }
        x = y.iter().map(|v| v / len).collect();
        lambda = len;
    }
    lambda.sqrt()
}

/// Exact rank of a matrix with rational entries.
pub fn exact_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a = rows.to_vec();
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..m {
            if i != rank && !a[i][col].is_zero() {
                let factor = &a[i][col] / &a[rank][col];
                let pivot_row = a[rank].clone();
                for (x, p) in a[i][col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn is_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Seeded random connected graph on `n` vertices: a random spanning tree
/// plus extra edges, or a random connected circulant.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    if rng.gen_bool(0.25) {
        let mut jumps: Vec<usize> = vec![1];
        for j in 2..=n / 2 {
            if rng.gen_bool(0.4) {
                jumps.push(j);
            }
        }
        return fixtures::circulant(n, &jumps);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    let extra_p = rng.gen_range(0.0..0.5);
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(extra_p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Random graph with possibly several components, none of them a single
/// vertex.
pub fn random_graph_without_isolated(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = if left <= 3 { left } else { rng.gen_range(2..=left) };
        let s = if left - s == 1 { s + 1 } else { s };
        sizes.push(s);
        left -= s;
    }
    let mut edges = Vec::new();
    let mut offset = 0;
    for s in sizes {
        let g = random_connected_graph(rng, s);
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        offset += s;
    }
    // scramble labels so components are not contiguous
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
        .collect();
    Graph::new(n, &edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random orthogonal matrix: Gram-Schmidt on a Gaussian-ish matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, k: usize) -> DenseMatrix {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for _ in 0..k {
            let mut v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for c in &cols {
                let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
            }
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len < 1e-3 {
                break;
            }
            cols.push(v.iter().map(|x| x / len).collect());
        }
        if cols.len() == k {
            return DenseMatrix::from_columns(&cols).unwrap();
        }
    }
}

/// Frame with the given vectors as columns.
pub fn frame_from_columns(cols: &[Vec<f64>]) -> Frame {
    Frame::from_vectors(cols).unwrap()
}

/// The frame whose canonical dual has synthesis `h`: `(H Hᵀ)⁻¹ H`.
pub fn frame_from_canonical_dual(h: &DenseMatrix) -> Frame {
    let s_inv = h.matmul(&h.transpose()).unwrap();
    let s = graphframe::linalg::moore_penrose(&s_inv).unwrap();
    Frame::new(s.matmul(h).unwrap()).unwrap()
}

pub fn assert_rel(a: f64, b: f64, rel: f64) {
    let scale = a.abs().max(b.abs()).max(1e-300);
    assert!((a - b).abs() / scale <= rel, "{a} vs {b}");
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}


/// The figure1 Laplacian written out entry by entry.
pub fn figure1_laplacian_literal() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        vec![2.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        vec![-1.0, 2.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        vec![-1.0, -1.0, 2.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 2.0, -1.0, 0.0, -1.0],
        vec![0.0, 0.0, 0.0, -1.0, 2.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, -1.0, 2.0, -1.0],
        vec![0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 2.0],
    ])
    .unwrap()
}

/// Figure1 frame in a hand-derived eigenbasis (eigenvalues 4, 2, 2 on the
/// 4-cycle, then 3, 3 on the triangle).
pub fn figure1_reference_frame() -> Frame {
    let a = 6f64.sqrt() / 2.0;
    let b = 18f64.sqrt() / 6.0;
    frame_from_columns(&[
        vec![0.0, 0.0, 0.0, a, -b],
        vec![0.0, 0.0, 0.0, 0.0, 18f64.sqrt() / 3.0],
        vec![0.0, 0.0, 0.0, -a, -b],
        vec![1.0, 1.0, 0.0, 0.0, 0.0],
        vec![-1.0, 0.0, 1.0, 0.0, 0.0],
        vec![1.0, -1.0, 0.0, 0.0, 0.0],
        vec![-1.0, 0.0, -1.0, 0.0, 0.0],
    ])
}

/// Canonical dual of [`figure1_reference_frame`], written out.
pub fn figure1_reference_dual() -> DenseMatrix {
    let a = 1.0 / 6f64.sqrt();
    let b = 1.0 / 18f64.sqrt();
    DenseMatrix::from_columns(&[
        vec![0.0, 0.0, 0.0, a, -b],
        vec![0.0, 0.0, 0.0, 0.0, 18f64.sqrt() / 9.0],
        vec![0.0, 0.0, 0.0, -a, -b],
        vec![0.25, 0.5, 0.0, 0.0, 0.0],
        vec![-0.25, 0.0, 0.5, 0.0, 0.0],
        vec![0.25, -0.5, 0.0, 0.0, 0.0],
        vec![-0.25, 0.0, -0.5, 0.0, 0.0],
    ])
    .unwrap()
}

/// Shift on the triangle component, in the basis of
/// [`figure1_reference_frame`].
pub const FIGURE1_REFERENCE_SHIFT: [f64; 5] = [0.0, 0.0, 0.0, 0.01, 0.01];

/// Canonical dual of the figure2 frame in a hand-derived eigenbasis.
pub fn figure2_reference_dual() -> DenseMatrix {
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let a = (4.0 - s2).sqrt();
    let b = (4.0 + s2).sqrt();
    let (c1, c2) = (s3 - 3.0, s3 + 3.0);
    let (p, q) = (s3 / 12.0, -s6 / 24.0);
    DenseMatrix::from_columns(&[
        vec![p, q, s2 / 4.0, 1.0 / (2.0 * a), 1.0 / (2.0 * b), 0.0, 0.0],
        vec![0.0, s6 / 8.0, 0.0, s2 / (4.0 * a), -s2 / (4.0 * b), -1.0 / (2.0 * c1), 1.0 / (2.0 * c2)],
        vec![p, q, -s2 / 4.0, 0.0, 0.0, -(s3 - 1.0) / (2.0 * c1), -(s3 + 1.0) / (2.0 * c2)],
        vec![p, q, -s2 / 4.0, 0.0, 0.0, (s3 - 1.0) / (2.0 * c1), (s3 + 1.0) / (2.0 * c2)],
        vec![-s3 / 6.0, q, 0.0, s2 / (4.0 * a), -s2 / (4.0 * b), 1.0 / (2.0 * c1), -1.0 / (2.0 * c2)],
        vec![p, q, s2 / 4.0, -1.0 / (2.0 * a), -1.0 / (2.0 * b), 0.0, 0.0],
        vec![0.0, s6 / 8.0, 0.0, -s2 / (4.0 * a), s2 / (4.0 * b), 1.0 / (2.0 * c1), -1.0 / (2.0 * c2)],
        vec![-s3 / 6.0, q, 0.0, -s2 / (4.0 * a), s2 / (4.0 * b), -1.0 / (2.0 * c1), 1.0 / (2.0 * c2)],
    ])
    .unwrap()
}

/// Shift in the basis of [`figure2_reference_dual`].
pub const FIGURE2_REFERENCE_SHIFT: [f64; 7] = [0.001, -0.001, 0.0, 0.0, 0.0, 0.0, 0.0];

/// Maps a shift written in `reference` coordinates into the basis of
/// `ours` through the unitary equivalence between the two frames.
pub fn map_shift(ours: &Frame, reference: &Frame, shift: &[f64]) -> Vec<f64> {
    let u = graphframe::frame::unitary_equivalence_witness(ours, reference)
        .unwrap()
        .expect("frames share a Gramian");
    u.mul_vec(shift).unwrap()
}

/// Products `‖f_i‖ ‖h_i‖` in frame order.
pub fn products(f: &Frame, h: &DenseMatrix) -> Vec<f64> {
    (0..f.count())
        .map(|i| graphframe::matrix::norm(&f.vector(i)) * graphframe::matrix::norm(&h.column(i)))
        .collect()
}
