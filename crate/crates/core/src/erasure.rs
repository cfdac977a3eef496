//! Erasure error operators and optimal-dual diagnostics for graph frames.
//!
//! When the coefficients indexed by `Λ` are lost, reconstructing with dual
//! `H` leaves the error operator `E_Λ = Σ_{i∈Λ} h_i f_iᵀ`. `D^r` is the
//! worst spectral norm over all `|Λ| = r`. For a single erasure `E_{{i}}`
//! is rank one, so `D¹ = max_i ‖f_i‖‖h_i‖`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binomial, unrank};
use crate::error::{Error, Result};
use crate::frame::{canonical_dual, dual_family_member, Frame, GraphFrameBundle};
use crate::linalg::{numerical_rank, spectral_norm};
use crate::matrix::{norm, DenseMatrix};
use crate::search::{perturbation_search, SearchOptions, SearchResult};
use crate::spark::SPARK_RANK_TOL;
use crate::walk::{is_walk_regular_with_tol, DEFAULT_MULTIPLICITY_TOL};

/// Maximum number of subsets exhaustive `D^r` may examine.
pub const DR_GUARD: u128 = 1_000_000;
/// Relative tolerance under which two products count as equal.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// `Σ_{i∈Λ} h_i f_iᵀ` as a `k × k` matrix.
pub fn error_operator(f: &Frame, h: &DenseMatrix, subset: &[usize]) -> Result<DenseMatrix> {
    check_dual_shape(f, h)?;
    let (k, n) = (f.dim(), f.count());
    let mut seen = vec![false; n];
    let mut e = DenseMatrix::zeros(k, k);
    for &i in subset {
        if i >= n {
            return Err(Error::InvalidArgument(format!("index {i} outside 0..{n}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!("index {i} repeated in erasure set")));
        }
        let fi = f.vector(i);
        for r in 0..k {
            let hr = h[(r, i)];
            for (c, &fc) in fi.iter().enumerate() {
                e[(r, c)] += hr * fc;
            }
        }
    }
    Ok(e)
}

fn check_dual_shape(f: &Frame, h: &DenseMatrix) -> Result<()> {
    if h.shape() != f.synthesis().shape() {
        return Err(Error::Shape(format!(
            "dual is {}x{}, frame is {}x{}",
            h.rows(),
            h.cols(),
            f.dim(),
            f.count()
        )));
    }
    Ok(())
}

/// Exhaustive `D^r` with its maximizing erasure set. Values within the
/// default tie tolerance of the maximum count as ties and the
/// lexicographically smallest set wins.
pub fn d_r(f: &Frame, h: &DenseMatrix, r: usize) -> Result<(f64, Vec<usize>)> {
    check_dual_shape(f, h)?;
    let n = f.count();
    if r == 0 || r >= n {
        return Err(Error::InvalidArgument(format!("erasure count {r} outside 1..{n}")));
    }
    let total = binomial(n, r);
    if total > DR_GUARD {
        return Err(Error::GuardExceeded {
            needed: total,
            limit: DR_GUARD,
        });
    }
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|rank| {
            error_operator(f, h, &unrank(n, r, rank))
                .and_then(|e| spectral_norm(&e))
                .unwrap_or(f64::NAN)
        })
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence { sweeps: 0, off_norm: f64::NAN });
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let thr = tie_threshold(max, DEFAULT_TIE_TOL);
    let rank = values.iter().position(|v| max - v <= thr).unwrap_or(0) as u128;
    let value = max;
    Ok((value, unrank(n, r, rank)))
}

/// Monte-Carlo lower bound on `D^r` from `samples` random erasure sets.
/// Never a substitute for the exhaustive value.
pub fn d_r_lower_bound(
    f: &Frame,
    h: &DenseMatrix,
    r: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, Vec<usize>)> {
    check_dual_shape(f, h)?;
    let n = f.count();
    if r == 0 || r >= n {
        return Err(Error::InvalidArgument(format!("erasure count {r} outside 1..{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for _ in 0..samples.max(1) {
        let mut subset = sample(&mut rng, n, r).into_vec();
        subset.sort_unstable();
        let value = spectral_norm(&error_operator(f, h, &subset)?)?;
        if value > best.0 || (value == best.0 && subset < best.1) {
            best = (value, subset);
        }
    }
    Ok(best)
}

/// `D¹ = max_i ‖f_i‖‖h_i‖` together with every product.
pub fn d1_fast(f: &Frame, h: &DenseMatrix) -> Result<(f64, Vec<f64>)> {
    check_dual_shape(f, h)?;
    let products: Vec<f64> = (0..f.count())
        .map(|i| norm(&f.vector(i)) * norm(&h.column(i)))
        .collect();
    let max = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((max, products))
}

fn tie_threshold(max: f64, tie_tol: f64) -> f64 {
    tie_tol * max.max(1.0)
}

/// Canonical-dual products `‖f_i‖‖S⁻¹f_i‖` in frame order.
pub fn canonical_products(b: &GraphFrameBundle) -> Result<Vec<f64>> {
    let h = canonical_dual(b)?;
    Ok(d1_fast(&b.frame, &h.realized)?.1)
}

/// Frame-order indices attaining the largest canonical product.
pub fn lambda1_set(b: &GraphFrameBundle, tie_tol: f64) -> Result<Vec<usize>> {
    Ok(argmax_set(&canonical_products(b)?, tie_tol))
}

fn argmax_set(products: &[f64], tie_tol: f64) -> Vec<usize> {
    let max = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let thr = tie_threshold(max, tie_tol);
    (0..products.len()).filter(|&i| max - products[i] <= thr).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constancy {
    pub is_constant: bool,
    pub spread: f64,
}

/// Whether the canonical products agree up to `tie_tol · max(1, max)`.
pub fn constancy_certificate(b: &GraphFrameBundle, tie_tol: f64) -> Result<Constancy> {
    Ok(constancy_of(&canonical_products(b)?, tie_tol))
}

fn constancy_of(products: &[f64], tie_tol: f64) -> Constancy {
    let (lo, hi) = products
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let spread = hi - lo;
    Constancy {
        is_constant: spread <= tie_threshold(hi, tie_tol),
        spread,
    }
}

/// Certificate that the canonical dual is not optimal for one erasure: the
/// maximizing vectors are independent and a dependence among all frame
/// vectors is nonzero on each of them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceWitness {
    /// Frame-order maximizing indices.
    pub lambda1: Vec<usize>,
    pub lambda1_rank: usize,
    /// Coefficients `α` with `Σ α_i f_i = 0`, frame order.
    pub dependence_coefficients: Vec<f64>,
    pub dependence_residual: f64,
}

/// Looks for the dependence certificate. The coefficients are all ones:
/// frame vectors of each component sum to zero, so they sum to zero overall.
pub fn dependence_witness(b: &GraphFrameBundle, tie_tol: f64) -> Result<Option<DependenceWitness>> {
    let lambda1 = lambda1_set(b, tie_tol)?;
    let sub = b.frame.synthesis().select_columns(&lambda1);
    let lambda1_rank = numerical_rank(&sub, SPARK_RANK_TOL)?;
    if lambda1_rank < lambda1.len() {
        return Ok(None);
    }
    let n = b.frame.count();
    let alpha = vec![1.0; n];
    let sum = b.frame.synthesis().mul_vec(&alpha)?;
    let residual = norm(&sum);
    let scale = b.frame.norms().into_iter().fold(1.0, f64::max);
    if residual > 1e-8 * scale {
        return Ok(None);
    }
    Ok(Some(DependenceWitness {
        lambda1,
        lambda1_rank,
        dependence_coefficients: alpha,
        dependence_residual: residual,
    }))
}

/// A shifted dual, distinct from the canonical one, with the same `D¹`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonUniquenessWitness {
    pub component: usize,
    pub shifts: Vec<Vec<f64>>,
    pub d1: f64,
}

/// Shifts a component that misses the maximizing set just enough to stay
/// below the maximum, when such a component exists.
pub fn non_uniqueness_witness(
    b: &GraphFrameBundle,
    tie_tol: f64,
) -> Result<Option<NonUniquenessWitness>> {
    let products = canonical_products(b)?;
    let max = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let thr = tie_threshold(max, tie_tol);
    let norms = b.frame.norms();
    for (c, &(start, end)) in b.component_ranges.iter().enumerate() {
        let comp_max = products[start..end].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max - comp_max <= 2.0 * thr {
            continue;
        }
        let fmax = norms[start..end].iter().copied().fold(0.0, f64::max);
        let step = (max - comp_max) / (2.0 * fmax);
        let mut shifts = vec![vec![0.0; b.frame.dim()]; b.component_count()];
        shifts[c][0] = step;
        let h = dual_family_member(b, &shifts)?;
        let (d1, _) = d1_fast(&b.frame, &h.realized)?;
        if (d1 - max).abs() <= thr {
            return Ok(Some(NonUniquenessWitness { component: c, shifts, d1 }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Canonical dual is the unique optimal dual for every number of erasures.
    UniqueOdAllErasures,
    /// Canonical dual is optimal for one erasure; uniqueness unresolved.
    #[serde(rename = "OD_1_ERASURE")]
    Od1Erasure,
    /// Canonical dual is not optimal for one erasure.
    NotOd,
    Inconclusive,
}

/// Which rule produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictRule {
    /// The graph is walk-regular, so the canonical products are constant.
    WalkRegularGraph,
    /// Canonical products are constant.
    ConstantProducts,
    /// Connected graph with non-constant products; dependence certificate.
    ConnectedNonConstant,
    /// A walk-regular component meets the maximizing set.
    WalkRegularComponentAttainsMax,
    /// Disconnected graph with an independent maximizing set.
    DependenceCertificate,
    /// The dual-family search found a strictly smaller `D¹`.
    SearchImprovement,
    NoRuleApplies,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictBasis {
    pub rule: VerdictRule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk_regular_components: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dependence: Option<DependenceWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_uniqueness: Option<NonUniquenessWitness>,
    pub notes: Vec<String>,
}

impl VerdictBasis {
    fn new(rule: VerdictRule) -> Self {
        VerdictBasis {
            rule,
            walk_regular_components: None,
            dependence: None,
            non_uniqueness: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErasureReport {
    pub d1_canonical: f64,
    /// Canonical products indexed by original vertex label (0-based).
    pub per_vertex_products: Vec<f64>,
    /// Maximizing vertices as sorted original labels (0-based).
    pub lambda1_set: Vec<usize>,
    pub constancy: Constancy,
    pub verdict: Verdict,
    pub verdict_basis: VerdictBasis,
    pub search_best: Option<SearchResult>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictOptions {
    pub tie_tol: f64,
    pub multiplicity_tol: f64,
    pub search: SearchOptions,
    /// Run the search even when a certificate settles the verdict.
    pub always_search: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            tie_tol: DEFAULT_TIE_TOL,
            multiplicity_tol: DEFAULT_MULTIPLICITY_TOL,
            search: SearchOptions::default(),
            always_search: false,
        }
    }
}

const TIE_NOTE: &str = "a dual whose worst single-erasure error equals the canonical one is counted as equally optimal";
const FAMILY_NOTE: &str = "search ranges over canonical dual plus one shift per component, taken as the complete dual family";

/// Decides whether the canonical dual is optimal under erasures.
///
/// Rules, first match wins: walk-regular graph; constant products;
/// connected with non-constant products; a walk-regular component meets the
/// maximizing set; a dependence certificate; a strict search improvement.
/// Otherwise inconclusive. Uniqueness is only ever claimed from the first
/// two rules.
pub fn canonical_verdict(b: &GraphFrameBundle, opts: &VerdictOptions) -> Result<ErasureReport> {
    let products = canonical_products(b)?;
    let d1_canonical = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lambda1 = argmax_set(&products, opts.tie_tol);
    let constancy = constancy_of(&products, opts.tie_tol);

    let mut lambda1_original: Vec<usize> = lambda1.iter().map(|&i| b.original_label(i)).collect();
    lambda1_original.sort_unstable();

    let walk = is_walk_regular_with_tol(&b.graph, opts.multiplicity_tol)?;
    let mut search_best = None;
    let (verdict, basis) = if walk.is_walk_regular {
        (Verdict::UniqueOdAllErasures, VerdictBasis::new(VerdictRule::WalkRegularGraph))
    } else if constancy.is_constant {
        (Verdict::UniqueOdAllErasures, VerdictBasis::new(VerdictRule::ConstantProducts))
    } else if b.graph.is_connected() && dependence_witness(b, opts.tie_tol)?.is_some() {
        let mut basis = VerdictBasis::new(VerdictRule::ConnectedNonConstant);
        basis.dependence = dependence_witness(b, opts.tie_tol)?;
        (Verdict::NotOd, basis)
    } else if let Some(components) = walk_regular_components_meeting(b, &lambda1, opts)? {
        let mut basis = VerdictBasis::new(VerdictRule::WalkRegularComponentAttainsMax);
        basis.walk_regular_components = Some(components);
        basis.non_uniqueness = non_uniqueness_witness(b, opts.tie_tol)?;
        if basis.non_uniqueness.is_some() {
            basis.notes.push("canonical dual is optimal but not unique".into());
        } else {
            basis.notes.push("uniqueness unresolved".into());
        }
        basis.notes.push(TIE_NOTE.into());
        (Verdict::Od1Erasure, basis)
    } else if let Some(w) = dependence_witness(b, opts.tie_tol)? {
        let mut basis = VerdictBasis::new(VerdictRule::DependenceCertificate);
        basis.dependence = Some(w);
        (Verdict::NotOd, basis)
    } else {
        let best = perturbation_search(b, &opts.search)?;
        let improved = best.improved;
        search_best = Some(best);
        let mut basis = if improved {
            VerdictBasis::new(VerdictRule::SearchImprovement)
        } else {
            VerdictBasis::new(VerdictRule::NoRuleApplies)
        };
        basis.notes.push(FAMILY_NOTE.into());
        (if improved { Verdict::NotOd } else { Verdict::Inconclusive }, basis)
    };
    if opts.always_search && search_best.is_none() {
        search_best = Some(perturbation_search(b, &opts.search)?);
    }

    Ok(ErasureReport {
        d1_canonical,
        per_vertex_products: b.to_original_order(&products),
        lambda1_set: lambda1_original,
        constancy,
        verdict,
        verdict_basis: basis,
        search_best,
    })
}

// Walk-regular components (by index) that meet the maximizing set, if any.
fn walk_regular_components_meeting(
    b: &GraphFrameBundle,
    lambda1: &[usize],
    opts: &VerdictOptions,
) -> Result<Option<Vec<usize>>> {
    let mut hits = Vec::new();
    for (c, &(start, end)) in b.component_ranges.iter().enumerate() {
        if !lambda1.iter().any(|&i| (start..end).contains(&i)) {
            continue;
        }
        let members: Vec<usize> = (start..end).collect();
        let sub = induced_subgraph(&b.graph, &members)?;
        if is_walk_regular_with_tol(&sub, opts.multiplicity_tol)?.is_walk_regular {
            hits.push(c);
        }
    }
    Ok((!hits.is_empty()).then_some(hits))
}

fn induced_subgraph(g: &crate::graph::Graph, members: &[usize]) -> Result<crate::graph::Graph> {
    let offset = members[0];
    let edges: Vec<(usize, usize)> = g
        .edges()
        .filter(|(u, v)| members.contains(u) && members.contains(v))
        .map(|(u, v)| (u - offset, v - offset))
        .collect();
    crate::graph::Graph::new(members.len(), &edges)
}
