//! Seeded search over the shifted-dual family for a smaller worst-case
//! single-erasure error.
//!
//! The objective `D¹(ν) = max_i ‖f_i‖ ‖S⁻¹f_i + ν_{c(i)}‖` is a maximum of
//! convex functions of the per-component shifts. The search samples shifts
//! uniformly from a ball, then refines the best point with descent steps
//! that lower every near-maximal product at once, and with coordinate
//! steps. All moves stay inside the ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{canonical_dual, GraphFrameBundle};
use crate::linalg::moore_penrose;
use crate::matrix::{norm, DenseMatrix};

/// Improvement over the canonical `D¹` that counts as strict.
pub const IMPROVEMENT_TOL: f64 = 1e-9;
const MAX_REFINE_ITERS: usize = 2000;
const ACTIVE_LEVELS: [f64; 4] = [1e-9, 1e-6, 1e-4, 1e-3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub trials: usize,
    pub radius: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            trials: 10_000,
            radius: 0.01,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    /// One shift per component, in the frame's basis.
    pub shifts: Vec<Vec<f64>>,
    pub d1: f64,
    pub canonical_d1: f64,
    pub improved: bool,
    pub trials: usize,
    pub radius: f64,
    pub seed: u64,
}

struct Objective {
    dim: usize,
    components: usize,
    component_of: Vec<usize>,
    frame_norms: Vec<f64>,
    dual_columns: Vec<Vec<f64>>,
}

impl Objective {
    fn new(b: &GraphFrameBundle) -> Result<Self> {
        let h = canonical_dual(b)?.realized;
        let n = b.frame.count();
        Ok(Objective {
            dim: b.frame.dim(),
            components: b.component_count(),
            component_of: (0..n).map(|i| b.component_of(i)).collect(),
            frame_norms: b.frame.norms(),
            dual_columns: (0..n).map(|i| h.column(i)).collect(),
        })
    }

    fn shifted(&self, i: usize, shifts: &[Vec<f64>]) -> Vec<f64> {
        let s = &shifts[self.component_of[i]];
        self.dual_columns[i].iter().zip(s).map(|(a, b)| a + b).collect()
    }

    fn products(&self, shifts: &[Vec<f64>]) -> Vec<f64> {
        (0..self.frame_norms.len())
            .map(|i| self.frame_norms[i] * norm(&self.shifted(i, shifts)))
            .collect()
    }

    fn value(&self, shifts: &[Vec<f64>]) -> f64 {
        self.products(shifts).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    fn zero(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0; self.dim]; self.components]
    }
}

/// Searches the shifted-dual family for a smaller `D¹` than the canonical
/// dual. Reproducible for a fixed seed.
pub fn perturbation_search(b: &GraphFrameBundle, opts: &SearchOptions) -> Result<SearchResult> {
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(opts.radius > 0.0 && opts.radius.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let obj = Objective::new(b)?;
    let canonical_d1 = obj.value(&obj.zero());

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = obj.zero();
    let mut best_value = canonical_d1;
    for _ in 0..opts.trials {
        let candidate: Vec<Vec<f64>> = (0..obj.components)
            .map(|_| sample_ball(&mut rng, obj.dim, opts.radius))
            .collect();
        let v = obj.value(&candidate);
        if v < best_value {
            best_value = v;
            best = candidate;
        }
    }

    let (shifts, d1) = refine(&obj, best, best_value, opts.radius)?;
    Ok(SearchResult {
        shifts,
        d1,
        canonical_d1,
        improved: d1 < canonical_d1 - IMPROVEMENT_TOL,
        trials: opts.trials,
        radius: opts.radius,
        seed: opts.seed,
    })
}

fn sample_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
    let len = norm(&v);
    if len == 0.0 {
        return vec![0.0; dim];
    }
    let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    v.iter_mut().for_each(|x| *x *= r / len);
    v
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; 1 - u keeps the log argument in (0, 1]
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn project(shifts: &mut [Vec<f64>], radius: f64) {
    for s in shifts.iter_mut() {
        let len = norm(s);
        if len > radius {
            s.iter_mut().for_each(|x| *x *= radius / len);
        }
    }
}

fn refine(
    obj: &Objective,
    mut x: Vec<Vec<f64>>,
    mut value: f64,
    radius: f64,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let mut step = radius / 4.0;
    let min_step = radius * 1e-12;
    for _ in 0..MAX_REFINE_ITERS {
        if let Some((y, v)) = active_set_step(obj, &x, value, radius)? {
            x = y;
            value = v;
            continue;
        }
        if let Some((y, v)) = coordinate_sweep(obj, &x, value, step, radius) {
            x = y;
            value = v;
            continue;
        }
        step *= 0.5;
        if step < min_step {
            break;
        }
    }
    Ok((x, value))
}

// Direction of least norm that lowers every near-maximal product at unit
// rate, followed by a halving line search. Tries several activity levels
// and keeps the best strict decrease.
fn active_set_step(
    obj: &Objective,
    x: &[Vec<f64>],
    value: f64,
    radius: f64,
) -> Result<Option<(Vec<Vec<f64>>, f64)>> {
    let products = obj.products(x);
    let width = obj.dim * obj.components;
    let mut best: Option<(Vec<Vec<f64>>, f64)> = None;
    let mut last_active: Vec<usize> = Vec::new();
    for level in ACTIVE_LEVELS {
        let active: Vec<usize> = (0..products.len())
            .filter(|&i| value - products[i] <= level * value.max(1.0))
            .collect();
        if active == last_active {
            continue;
        }
        last_active = active.clone();

        let mut jac = DenseMatrix::zeros(active.len(), width);
        for (row, &i) in active.iter().enumerate() {
            let h = obj.shifted(i, x);
            let len = norm(&h);
            if len == 0.0 {
                continue;
            }
            let offset = obj.component_of[i] * obj.dim;
            for (j, &hj) in h.iter().enumerate() {
                jac[(row, offset + j)] = obj.frame_norms[i] * hj / len;
            }
        }
        let gram = jac.matmul(&jac.transpose())?;
        let rhs = vec![-1.0; active.len()];
        let y = moore_penrose(&gram)?.mul_vec(&rhs)?;
        let dir = jac.transpose().mul_vec(&y)?;
        let achieved = jac.mul_vec(&dir)?;
        if achieved.iter().any(|&a| a > -0.5) {
            // no common descent direction for this active set
            continue;
        }
        let dir_len = norm(&dir);
        if dir_len == 0.0 {
            continue;
        }
        let mut t = 2.0 * radius / dir_len;
        for _ in 0..60 {
            let mut y: Vec<Vec<f64>> = x.to_vec();
            for (c, block) in y.iter_mut().enumerate() {
                for (j, v) in block.iter_mut().enumerate() {
                    *v += t * dir[c * obj.dim + j];
                }
            }
            project(&mut y, radius);
            let v = obj.value(&y);
            let incumbent = best.as_ref().map_or(value, |b| b.1);
            if v < incumbent {
                best = Some((y, v));
            }
            t *= 0.5;
        }
    }
    Ok(best.filter(|b| b.1 < value))
}

fn coordinate_sweep(
    obj: &Objective,
    x: &[Vec<f64>],
    value: f64,
    step: f64,
    radius: f64,
) -> Option<(Vec<Vec<f64>>, f64)> {
    let mut current = x.to_vec();
    let mut current_value = value;
    let mut moved = false;
    for c in 0..obj.components {
        for j in 0..obj.dim {
            for sign in [1.0, -1.0] {
                let mut y = current.clone();
                y[c][j] += sign * step;
                project(&mut y, radius);
                let v = obj.value(&y);
                if v < current_value {
                    current = y;
                    current_value = v;
                    moved = true;
                    break;
                }
            }
        }
    }
    moved.then_some((current, current_value))
}
