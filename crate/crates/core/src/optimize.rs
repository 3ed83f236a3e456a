//! Multistart search for extreme sectional curvatures over 2-planes.
//!
//! A plane is a pair `(x, y)` of coordinate vectors; evaluators must depend
//! only on the span. Sampling is entrywise standard normal followed by
//! Gram-Schmidt, descent is finite-difference gradient descent on the pair
//! with renormalization after each step.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::Coeffs;
use crate::par::{self, Exec};
use crate::rng::{normal_vec, stream_rng, streams};

/// Central-difference step on unit-normalized coordinates.
pub const FD_STEP: f64 = 1e-5;
/// Random planes drawn per fresh descent start; the best seeds the descent.
const START_POOL: usize = 32;
const INITIAL_STEP: f64 = 0.1;
const MIN_STEP: f64 = 1e-11;

/// Sample and descent budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub samples: usize,
    pub restarts: usize,
    pub max_iter: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            samples: 200_000,
            restarts: 64,
            max_iter: 500,
            exec: Exec::default(),
        }
    }
}

impl Budget {
    pub fn new(samples: usize, restarts: usize, max_iter: usize) -> Self {
        Budget {
            samples,
            restarts,
            max_iter,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// A 2-plane given by two spanning vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPlane {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TwoPlane {
    pub fn new(x: &Coeffs, y: &Coeffs) -> Self {
        TwoPlane {
            x: x.iter().copied().collect(),
            y: y.iter().copied().collect(),
        }
    }

    pub fn x(&self) -> Coeffs {
        Coeffs::from_column_slice(&self.x)
    }

    pub fn y(&self) -> Coeffs {
        Coeffs::from_column_slice(&self.y)
    }

    /// Euclidean Gram determinant of the coordinates.
    pub fn gram_det(&self) -> f64 {
        gram(&self.x(), &self.y())
    }
}

/// Extreme values found by [`min_sectional`].
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureExtrema {
    pub min_value: f64,
    pub max_value: f64,
    pub argmin: TwoPlane,
    pub argmax: TwoPlane,
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
    /// `min / max` when `max > 0`.
    pub pinching: Option<f64>,
    pub evaluations: u64,
}

fn gram(x: &Coeffs, y: &Coeffs) -> f64 {
    let xy = x.dot(y);
    x.norm_squared() * y.norm_squared() - xy * xy
}

/// Gram-Schmidt on a pair packed as `[x; y]`.
fn renormalize_pair(z: &mut DVector<f64>, n: usize) {
    let nx = z.rows(0, n).norm();
    if nx > 0.0 {
        z.rows_mut(0, n).unscale_mut(nx);
    }
    let c = z.rows(0, n).dot(&z.rows(n, n));
    let x = z.rows(0, n).into_owned();
    z.rows_mut(n, n).axpy(-c, &x, 1.0);
    let ny = z.rows(n, n).norm();
    if ny > 0.0 {
        z.rows_mut(n, n).unscale_mut(ny);
    }
}

fn split(z: &DVector<f64>, n: usize) -> (Coeffs, Coeffs) {
    (z.rows(0, n).into_owned(), z.rows(n, n).into_owned())
}

fn random_pair(seed: u64, stream: u64, index: u64, n: usize) -> DVector<f64> {
    let mut rng = stream_rng(seed, stream, index);
    let mut z = DVector::from_vec(normal_vec(&mut rng, 2 * n));
    renormalize_pair(&mut z, n);
    z
}

/// Result of one local descent.
#[derive(Debug, Clone)]
pub struct Descent {
    pub point: DVector<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: u64,
}

/// Minimize `f` by central-difference gradient descent with step halving.
///
/// `normalize` is applied to every accepted and trial point. Terminates after
/// `max_iter` iterations or when the step falls below a fixed floor.
pub fn descend<F, N>(f: &F, normalize: &N, start: DVector<f64>, max_iter: usize, h: f64) -> Descent
where
    F: Fn(&DVector<f64>) -> f64 + ?Sized,
    N: Fn(&mut DVector<f64>) + ?Sized,
{
    let mut z = start;
    normalize(&mut z);
    let mut v = f(&z);
    let mut evals = 1u64;
    let mut step = INITIAL_STEP;
    let mut iterations = 0;
    if !v.is_finite() {
        return Descent {
            point: z,
            value: v,
            iterations,
            evaluations: evals,
        };
    }
    let mut probe = z.clone();
    while iterations < max_iter {
        iterations += 1;
        let mut grad = DVector::zeros(z.len());
        for i in 0..z.len() {
            let orig = z[i];
            probe[i] = orig + h;
            let fp = f(&probe);
            probe[i] = orig - h;
            let fm = f(&probe);
            probe[i] = orig;
            grad[i] = (fp - fm) / (2.0 * h);
        }
        evals += 2 * z.len() as u64;
        let gn = grad.norm();
        if !(gn > 1e-13) {
            break;
        }
        let dir = grad / gn;
        let mut accepted = false;
        while step >= MIN_STEP {
            let mut cand = &z - &dir * step;
            normalize(&mut cand);
            let cv = f(&cand);
            evals += 1;
            if cv < v {
                z = cand;
                v = cv;
                step = (step * 2.0).min(1.0);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        probe.copy_from(&z);
    }
    Descent {
        point: z,
        value: v,
        iterations,
        evaluations: evals,
    }
}

/// Indices at which the running minimum strictly improves.
fn record_indices(values: &[f64]) -> Vec<usize> {
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if *v < best {
            best = *v;
            out.push(i);
        }
    }
    out
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)) {
        std::cmp::Ordering::Greater => b,
        _ => a,
    }
}

struct SideResult {
    value: f64,
    point: DVector<f64>,
    evaluations: u64,
}

/// Minimize `sign * f` over planes.
fn search_side<F>(f: &F, dim: usize, values: &[f64], sign: f64, budget: &Budget, seed: u64) -> SideResult
where
    F: Fn(&Coeffs, &Coeffs) -> f64 + Sync,
{
    let signed: Vec<f64> = values
        .iter()
        .map(|v| if v.is_finite() { sign * v } else { f64::INFINITY })
        .collect();
    let sample_starts = record_indices(&signed);
    let stream = if sign > 0.0 { 0u64 } else { 1u64 };
    let objective = |z: &DVector<f64>| {
        let (x, y) = split(z, dim);
        if gram(&x, &y) < 1e-14 {
            return f64::INFINITY;
        }
        let v = sign * f(&x, &y);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let normalize = |z: &mut DVector<f64>| renormalize_pair(z, dim);

    // Fresh starts: best of a small pool from an independent stream.
    let n_starts = sample_starts.len() + budget.restarts;
    let runs: Vec<(f64, DVector<f64>, u64)> = par::map_indices(budget.exec, n_starts, |s| {
        let (start, mut evals) = if s < sample_starts.len() {
            (random_pair(seed, streams::PLANES, sample_starts[s] as u64, dim), 0u64)
        } else {
            let r = (s - sample_starts.len()) as u64;
            let mut best: Option<(f64, DVector<f64>)> = None;
            for j in 0..START_POOL as u64 {
                let z = random_pair(
                    seed,
                    streams::DESCENT_STARTS,
                    (r * 2 + stream) * START_POOL as u64 + j,
                    dim,
                );
                let v = objective(&z);
                if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                    best = Some((v, z));
                }
            }
            (best.expect("pool is nonempty").1, START_POOL as u64)
        };
        let d = descend(&objective, &normalize, start, budget.max_iter, FD_STEP);
        evals += d.evaluations;
        (d.value, d.point, evals)
    });

    let mut best = (f64::INFINITY, usize::MAX);
    for (i, v) in signed.iter().enumerate() {
        best = better(best, (*v, i));
    }
    let mut best_point = if best.1 < values.len() {
        random_pair(seed, streams::PLANES, best.1 as u64, dim)
    } else {
        DVector::zeros(2 * dim)
    };
    let mut evaluations = 0;
    let offset = values.len();
    for (s, (v, z, e)) in runs.into_iter().enumerate() {
        evaluations += e;
        let cand = better(best, (v, offset + s));
        if cand.1 != best.1 {
            best = cand;
            best_point = z;
        }
    }
    SideResult {
        value: sign * best.0,
        point: best_point,
        evaluations,
    }
}

/// Minimum and maximum of `f` over 2-planes in `R^dim`.
///
/// `f(x, y)` must be the curvature of `span(x, y)`; non-finite values are
/// ignored. Deterministic given `seed` and `budget` regardless of execution
/// mode.
pub fn min_sectional<F>(f: &F, dim: usize, budget: &Budget, seed: u64) -> Result<CurvatureExtrema>
where
    F: Fn(&Coeffs, &Coeffs) -> f64 + Sync,
{
    if budget.samples == 0 && budget.restarts == 0 {
        return Err(Error::EmptyBudget);
    }
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two dimensions for a plane, got {dim}"
        )));
    }
    let values: Vec<f64> = par::map_indices(budget.exec, budget.samples, |i| {
        let z = random_pair(seed, streams::PLANES, i as u64, dim);
        let (x, y) = split(&z, dim);
        f(&x, &y)
    });
    let lo = search_side(f, dim, &values, 1.0, budget, seed);
    let hi = search_side(f, dim, &values, -1.0, budget, seed);
    if !lo.value.is_finite() || !hi.value.is_finite() {
        return Err(Error::InvalidParameter(
            "curvature evaluator returned no finite values".into(),
        ));
    }
    let (ax, ay) = split(&lo.point, dim);
    let (bx, by) = split(&hi.point, dim);
    Ok(CurvatureExtrema {
        min_value: lo.value,
        max_value: hi.value,
        argmin: TwoPlane::new(&ax, &ay),
        argmax: TwoPlane::new(&bx, &by),
        samples: budget.samples,
        restarts: budget.restarts,
        seed,
        pinching: (hi.value > 0.0).then(|| lo.value / hi.value),
        evaluations: budget.samples as u64 + lo.evaluations + hi.evaluations,
    })
}

/// Pinching `min / max`, reported as 0 when the minimum is not positive.
pub fn pinching_of(ext: &CurvatureExtrema) -> Result<f64> {
    if !(ext.max_value > 0.0) {
        return Err(Error::NonPositiveMax(ext.max_value));
    }
    Ok((ext.min_value / ext.max_value).max(0.0))
}

pub fn pinching<F>(f: &F, dim: usize, budget: &Budget, seed: u64) -> Result<f64>
where
    F: Fn(&Coeffs, &Coeffs) -> f64 + Sync,
{
    pinching_of(&min_sectional(f, dim, budget, seed)?)
}

/// Worst relative disagreement between central-difference directional
/// derivatives at steps `h` and `h/2`, over random planes and directions.
pub fn gradient_consistency_check_with_step<F>(f: &F, dim: usize, trials: usize, seed: u64, h: f64) -> f64
where
    F: Fn(&Coeffs, &Coeffs) -> f64,
{
    let mut worst: f64 = 0.0;
    for t in 0..trials as u64 {
        let z = random_pair(seed, streams::AUDIT, 2 * t, dim);
        let mut rng = stream_rng(seed, streams::AUDIT, 2 * t + 1);
        let mut d = DVector::from_vec(normal_vec(&mut rng, 2 * dim));
        d.normalize_mut();
        let eval = |w: &DVector<f64>| {
            let (x, y) = split(w, dim);
            f(&x, &y)
        };
        let guard = |s: f64| {
            let (x, y) = split(&(&z + &d * s), dim);
            gram(&x, &y) >= 1e-6
        };
        if !guard(h) || !guard(-h) {
            continue;
        }
        let deriv = |s: f64| (eval(&(&z + &d * s)) - eval(&(&z - &d * s))) / (2.0 * s);
        let d1 = deriv(h);
        let d2 = deriv(h / 2.0);
        let scale = d2.abs().max(eval(&z).abs()).max(1e-12);
        worst = worst.max((d1 - d2).abs() / scale);
    }
    worst
}

/// [`gradient_consistency_check_with_step`] at `h = 1e-3`.
pub fn gradient_consistency_check<F>(f: &F, dim: usize, trials: usize, seed: u64) -> f64
where
    F: Fn(&Coeffs, &Coeffs) -> f64,
{
    gradient_consistency_check_with_step(f, dim, trials, seed, 1e-3)
}

/// Boxed plane evaluator borrowing from its family.
pub type PlaneFn<'a> = Box<dyn Fn(&Coeffs, &Coeffs) -> f64 + Sync + Send + 'a>;

/// A parameterized metric family whose pinching can be optimized.
pub trait MetricFamily: Sync {
    fn name(&self) -> String;
    /// Search box for each parameter; equal endpoints pin a parameter.
    fn bounds(&self) -> Vec<(f64, f64)>;
    /// Dimension of the plane coordinates.
    fn plane_dim(&self) -> usize;
    /// Curvature evaluator for the given parameters.
    fn curvature(&self, params: &[f64]) -> Result<PlaneFn<'_>>;
}

/// Outcome of [`optimize_family`].
#[derive(Debug, Clone, Serialize)]
pub struct FamilyOptimum {
    pub family: String,
    pub best_params: Vec<f64>,
    pub value: f64,
    pub grid_points: usize,
    pub refinement_evaluations: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximize pinching over `family`: scan `grid`, then refine coordinatewise
/// by golden-section search inside one grid spacing of the best point.
///
/// `refine_rounds` sweeps over all free coordinates; each line search uses
/// `line_evals` objective evaluations.
pub fn optimize_family(
    family: &dyn MetricFamily,
    grid: &[Vec<f64>],
    budget: &Budget,
    seed: u64,
    refine_rounds: usize,
    line_evals: usize,
) -> Result<FamilyOptimum> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let bounds = family.bounds();
    for g in grid {
        if g.len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: bounds.len(),
                got: g.len(),
            });
        }
    }
    let objective = |p: &[f64]| -> f64 {
        family
            .curvature(p)
            .and_then(|f| pinching(&f, family.plane_dim(), budget, seed))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut best: Option<(f64, usize)> = None;
    let scores: Vec<f64> = grid.iter().map(|p| objective(p)).collect();
    for (i, s) in scores.iter().enumerate() {
        // maximize; ties go to the lower index
        if best.is_none_or(|(b, _)| *s > b) {
            best = Some((*s, i));
        }
    }
    let (mut value, bi) = best.expect("grid is nonempty");
    let mut params = grid[bi].clone();
    let mut refinement = 0;

    // bracket width per coordinate: smallest positive grid spacing
    let spacing: Vec<f64> = (0..bounds.len())
        .map(|c| {
            let mut vals: Vec<f64> = grid.iter().map(|g| g[c]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
        })
        .collect();

    if grid.len() > 1 && value.is_finite() {
        for _ in 0..refine_rounds {
            for c in 0..bounds.len() {
                let (lo_b, hi_b) = bounds[c];
                if !(hi_b > lo_b) || !spacing[c].is_finite() {
                    continue;
                }
                let mut a = (params[c] - spacing[c]).max(lo_b);
                let mut b = (params[c] + spacing[c]).min(hi_b);
                let at = |x: f64, params: &[f64]| {
                    let mut p = params.to_vec();
                    p[c] = x;
                    p
                };
                let mut x1 = b - GOLDEN * (b - a);
                let mut x2 = a + GOLDEN * (b - a);
                let mut f1 = objective(&at(x1, &params));
                let mut f2 = objective(&at(x2, &params));
                refinement += 2;
                for _ in 2..line_evals.max(2) {
                    if f1 >= f2 {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - GOLDEN * (b - a);
                        f1 = objective(&at(x1, &params));
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + GOLDEN * (b - a);
                        f2 = objective(&at(x2, &params));
                    }
                    refinement += 1;
                }
                let (xb, fb) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
                if fb > value {
                    value = fb;
                    params[c] = xb;
                }
            }
        }
    }
    Ok(FamilyOptimum {
        family: family.name(),
        best_params: params,
        value,
        grid_points: grid.len(),
        refinement_evaluations: refinement,
    })
}

/// Evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
