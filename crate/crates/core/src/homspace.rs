//! Homogeneous quotients `G/H` with an optional intermediate `H ⊂ K ⊂ G`.
//!
//! Curvature is evaluated at the identity coset. Horizontal vectors are
//! P-orthogonal to `h`; O'Neill's correction uses the P-orthogonal vertical
//! part of the bracket.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{Coeffs, LieAlgebraBasis, Subalgebra};
use crate::metric::{
    check_len, subalgebra_scaled, symmetric_pair_defect, unnormalized_curvature, LeftInvariantMetric, GRAM_TOL,
};
use crate::optimize::{descend, min_sectional, Budget, FD_STEP};
use crate::par;
use crate::rng::{normal_vec, stream_rng, streams};

pub const INVARIANCE_TOL: f64 = 1e-10;
pub const HORIZONTAL_TOL: f64 = 1e-9;
/// Fatness margins below this count as zero.
pub const FATNESS_EPS: f64 = 1e-6;

/// `H ⊂ K ⊂ G` with the Q-orthogonal splittings `g = k + m`, `k = h + p`.
#[derive(Debug, Clone)]
pub struct HomogeneousSpec {
    g: Arc<LieAlgebraBasis>,
    h: Subalgebra,
    k: Option<Subalgebra>,
    m: DMatrix<f64>,
    p: DMatrix<f64>,
    symmetric_base: bool,
}

impl HomogeneousSpec {
    pub fn new(h: Subalgebra, k: Option<Subalgebra>) -> Result<Self> {
        let g = h.parent().clone();
        if let Some(k) = &k {
            if !Arc::ptr_eq(k.parent(), &g) && k.parent().dim() != g.dim() {
                return Err(Error::DimensionMismatch {
                    expected: g.dim(),
                    got: k.parent().dim(),
                });
            }
            if !h.is_contained_in(k, 1e-10) {
                return Err(Error::InvalidParameter("h is not contained in k".into()));
            }
        }
        let (m, p, symmetric_base) = match &k {
            Some(k) => (
                k.complement_frame(),
                k.relative_complement_frame(&h),
                symmetric_pair_defect(k).0 <= 1e-10,
            ),
            None => (h.complement_frame(), DMatrix::zeros(g.dim(), 0), false),
        };
        Ok(HomogeneousSpec {
            g,
            h,
            k,
            m,
            p,
            symmetric_base,
        })
    }

    pub fn g(&self) -> &Arc<LieAlgebraBasis> {
        &self.g
    }

    pub fn h(&self) -> &Subalgebra {
        &self.h
    }

    pub fn k(&self) -> Option<&Subalgebra> {
        self.k.as_ref()
    }

    /// Complement of `k` in `g` (of `h` when no `k` is given).
    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Complement of `h` in `k`; empty when no `k` is given.
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Whether `[m, m] ⊂ k`.
    pub fn symmetric_base(&self) -> bool {
        self.symmetric_base
    }

    /// Q-orthonormal frame of the complement of `h`.
    pub fn tangent_frame(&self) -> DMatrix<f64> {
        self.h.complement_frame()
    }

    pub fn dim(&self) -> usize {
        self.g.dim() - self.h.dim()
    }
}

/// Largest `|P ad_Z - ad_Z P|` over frame vectors `Z` of `h`.
pub fn right_invariance_defect(metric: &LeftInvariantMetric, h: &Subalgebra) -> f64 {
    let alg = metric.alg();
    h.vectors()
        .iter()
        .map(|z| {
            let ad = alg.ad_matrix(z);
            (metric.p() * &ad - &ad * metric.p()).amax()
        })
        .fold(0.0, f64::max)
}

pub fn validate_right_invariance(metric: &LeftInvariantMetric, h: &Subalgebra) -> bool {
    right_invariance_defect(metric, h) <= INVARIANCE_TOL * (1.0 + metric.p().amax())
}

/// Precomputed O'Neill evaluator for `(G, P) -> G/H`.
#[derive(Debug, Clone)]
pub struct QuotientCurvature {
    metric: LeftInvariantMetric,
    h_frame: DMatrix<f64>,
    /// `(Hᵀ P H)^{-1} Hᵀ P`: P-orthogonal coordinates on `h`.
    h_coords: DMatrix<f64>,
    h_gram: DMatrix<f64>,
    /// P-orthonormal basis of the horizontal space.
    horizontal: DMatrix<f64>,
}

impl QuotientCurvature {
    pub fn new(metric: LeftInvariantMetric, h: &Subalgebra) -> Result<Self> {
        if h.parent().dim() != metric.alg().dim() {
            return Err(Error::DimensionMismatch {
                expected: metric.alg().dim(),
                got: h.parent().dim(),
            });
        }
        let defect = right_invariance_defect(&metric, h);
        if defect > INVARIANCE_TOL * (1.0 + metric.p().amax()) {
            return Err(Error::NotRightInvariant { defect });
        }
        let hf = h.frame().clone();
        let ph = metric.p() * &hf;
        let h_gram = hf.transpose() * &ph;
        let h_coords = if hf.ncols() == 0 {
            DMatrix::zeros(0, metric.alg().dim())
        } else {
            let inv = h_gram
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::NotPositiveDefinite("metric restricted to h".into()))?;
            inv * ph.transpose()
        };
        // P-orthogonal lifts of the Q-complement, then P-orthonormalize.
        let lifts = {
            let c = h.complement_frame();
            &c - &hf * (&h_coords * &c)
        };
        let gram = lifts.transpose() * metric.p() * &lifts;
        let eig = SymmetricEigen::new(gram);
        let inv_sqrt = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
        let horizontal = &lifts * &eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt);
        Ok(QuotientCurvature {
            metric,
            h_frame: hf,
            h_coords,
            h_gram,
            horizontal,
        })
    }

    pub fn metric(&self) -> &LeftInvariantMetric {
        &self.metric
    }

    /// P-orthonormal frame of the horizontal space.
    pub fn horizontal_frame(&self) -> &DMatrix<f64> {
        &self.horizontal
    }

    pub fn horizontal_dim(&self) -> usize {
        self.horizontal.ncols()
    }

    /// P-orthogonal coordinates of the vertical part of `v`, and its squared P-norm.
    fn vertical(&self, v: &Coeffs) -> f64 {
        if self.h_frame.ncols() == 0 {
            return 0.0;
        }
        let c = &self.h_coords * v;
        c.dot(&(&self.h_gram * &c))
    }

    /// Size of the P-orthogonal vertical part of `x` relative to `|x|_P`.
    pub fn horizontal_defect(&self, x: &Coeffs) -> f64 {
        let n = self.metric.norm_sq(x).sqrt();
        if n == 0.0 {
            return 0.0;
        }
        self.vertical(x).sqrt() / n
    }

    /// P-orthogonal projection onto the horizontal space.
    pub fn horizontal_part(&self, x: &Coeffs) -> Coeffs {
        if self.h_frame.ncols() == 0 {
            return x.clone();
        }
        x - &self.h_frame * (&self.h_coords * x)
    }

    /// Unchecked quotient curvature of horizontal `x, y`; NaN on degenerate planes.
    pub fn eval(&self, x: &Coeffs, y: &Coeffs) -> f64 {
        let g = self.metric.gram_det(x, y);
        if !(g >= GRAM_TOL) {
            return f64::NAN;
        }
        let a = self.metric.alg().br(x, y);
        (unnormalized_curvature(&self.metric, x, y) + 0.75 * self.vertical(&a)) / g
    }

    /// Curvature of the plane with coordinates `a, b` in the horizontal frame.
    pub fn eval_coords(&self, a: &Coeffs, b: &Coeffs) -> f64 {
        self.eval(&(&self.horizontal * a), &(&self.horizontal * b))
    }

    /// Checked evaluation.
    pub fn sectional(&self, x: &Coeffs, y: &Coeffs) -> Result<f64> {
        let alg = self.metric.alg();
        check_len(alg, x)?;
        check_len(alg, y)?;
        for v in [x, y] {
            let defect = self.horizontal_defect(v);
            if defect > HORIZONTAL_TOL {
                return Err(Error::NotHorizontal { defect });
            }
        }
        let g = self.metric.gram_det(x, y);
        if !(g >= GRAM_TOL) {
            return Err(Error::DegeneratePlane(g));
        }
        Ok(self.eval(x, y))
    }
}

/// Sectional curvature of `G/H` with the metric induced by `metric`.
pub fn quotient_sectional(metric: &LeftInvariantMetric, h: &Subalgebra, x: &Coeffs, y: &Coeffs) -> Result<f64> {
    QuotientCurvature::new(metric.clone(), h)?.sectional(x, y)
}

/// Closed form `1/4 |[x,y]_rest|^2 + |[x,y]_h|^2` for the metric induced by Q.
pub fn normal_homogeneous_sectional(spec: &HomogeneousSpec, x: &Coeffs, y: &Coeffs) -> Result<f64> {
    normal_sectional_in(spec.g(), spec.h(), x, y)
}

fn normal_sectional_in(g: &LieAlgebraBasis, h: &Subalgebra, x: &Coeffs, y: &Coeffs) -> Result<f64> {
    check_len(g, x)?;
    check_len(g, y)?;
    for v in [x, y] {
        let n = v.norm();
        let defect = if n > 0.0 { h.project(v).0.norm() / n } else { 0.0 };
        if defect > HORIZONTAL_TOL {
            return Err(Error::NotHorizontal { defect });
        }
    }
    let xy = x.dot(y);
    let gram = x.norm_squared() * y.norm_squared() - xy * xy;
    if !(gram >= GRAM_TOL) {
        return Err(Error::DegeneratePlane(gram));
    }
    let (vh, vm) = h.project(&g.br(x, y));
    Ok((0.25 * vm.norm_squared() + vh.norm_squared()) / gram)
}

/// The metric `t Q|k + Q|m` on `g`.
pub fn g_t_metric(spec: &HomogeneousSpec, t: f64) -> Result<LeftInvariantMetric> {
    let k = spec
        .k()
        .ok_or_else(|| Error::InvalidParameter("g_t needs an intermediate subalgebra".into()))?;
    subalgebra_scaled(k, t)
}

/// Quotient curvature of `G/H` under `g_t = t Q|p + Q|m`.
pub fn g_t_quotient_sectional(spec: &HomogeneousSpec, t: f64, x: &Coeffs, y: &Coeffs) -> Result<f64> {
    let metric = g_t_metric(spec, t)?;
    quotient_sectional(&metric, spec.h(), x, y)
}

/// Minimum of `|[X, Y]|^2` over unit `X ∈ p`, `Y ∈ m`.
///
/// For fixed `X` the inner minimum is the smallest eigenvalue of the Gram
/// matrix of `ad_X` on `m`; the outer minimum over the sphere of `p` is found
/// by sampling and descent.
pub fn fatness_margin(spec: &HomogeneousSpec, budget: &Budget, seed: u64) -> Result<f64> {
    if spec.k().is_none() {
        return Err(Error::InvalidParameter(
            "fatness needs an intermediate subalgebra".into(),
        ));
    }
    if budget.samples == 0 && budget.restarts == 0 {
        return Err(Error::EmptyBudget);
    }
    let g = spec.g();
    let p = spec.p();
    let m = spec.m();
    let dp = p.ncols();
    if dp == 0 || m.ncols() == 0 {
        return Ok(f64::INFINITY);
    }
    let inner = |a: &nalgebra::DVector<f64>| -> f64 {
        let n = a.norm();
        if n == 0.0 {
            return f64::INFINITY;
        }
        let x = p * (a / n);
        let ad_m = g.ad_matrix(&x) * m;
        SymmetricEigen::new(ad_m.transpose() * ad_m).eigenvalues.min().max(0.0)
    };
    let unit = |a: &mut nalgebra::DVector<f64>| {
        let n = a.norm();
        if n > 0.0 {
            *a /= n;
        }
    };
    let draw = |stream_index: u64| {
        let mut rng = stream_rng(seed, streams::FATNESS, stream_index);
        nalgebra::DVector::from_vec(normal_vec(&mut rng, dp))
    };
    let values = par::map_indices(budget.exec, budget.samples, |i| inner(&draw(2 * i as u64)));
    let mut best = values.iter().copied().fold(f64::INFINITY, f64::min);
    // descend from the running minima and from fresh starts
    let mut starts = Vec::new();
    let mut run = f64::INFINITY;
    for (i, v) in values.iter().enumerate() {
        if *v < run {
            run = *v;
            starts.push(draw(2 * i as u64));
        }
    }
    starts.extend((0..budget.restarts as u64).map(|r| draw(2 * r + 1)));
    let refined = par::map_slice(budget.exec, &starts, |s| {
        descend(&inner, &unit, s.clone(), budget.max_iter, FD_STEP).value
    });
    for v in refined {
        best = best.min(v);
    }
    Ok(best)
}

/// Outcome of checking the three fibration conditions for `g_t`.
#[derive(Debug, Clone, Serialize)]
pub struct WallachReport {
    pub t: f64,
    pub symmetric_base: bool,
    /// Rank one of `G/K` is declared, not computed.
    pub rank_one: &'static str,
    pub fiber_min_curvature: f64,
    pub fatness_margin: f64,
    pub verdict_positive: bool,
    /// Minimum of sampled `g_t` curvatures, as a cross-check.
    pub sampled_min: f64,
}

/// Check `[m,m] ⊂ k`, positivity of `K/H` under Q, and `[p, m] ≠ 0`, then
/// sample `g_t` curvatures. The verdict asserts positivity when all three
/// hold and `0 < t < 1`.
pub fn wallach_check(spec: &HomogeneousSpec, t: f64, budget: &Budget, seed: u64) -> Result<WallachReport> {
    let k = spec
        .k()
        .ok_or_else(|| Error::InvalidParameter("Wallach check needs an intermediate subalgebra".into()))?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let p = spec.p();
    let g = spec.g();
    let fiber_min_curvature = if p.ncols() >= 2 {
        let f = |a: &Coeffs, b: &Coeffs| normal_sectional_in(g, spec.h(), &(p * a), &(p * b)).unwrap_or(f64::NAN);
        min_sectional(&f, p.ncols(), budget, seed)?.min_value
    } else {
        // one-dimensional fibers carry no planes
        f64::INFINITY
    };
    let fat = fatness_margin(spec, budget, seed)?;
    let q = QuotientCurvature::new(subalgebra_scaled(k, t)?, spec.h())?;
    let f = |a: &Coeffs, b: &Coeffs| q.eval_coords(a, b);
    let sampled_min = min_sectional(&f, q.horizontal_dim(), budget, seed)?.min_value;
    let verdict_positive =
        spec.symmetric_base() && fiber_min_curvature > 0.0 && fat > FATNESS_EPS && t > 0.0 && t < 1.0;
    Ok(WallachReport {
        t,
        symmetric_base: spec.symmetric_base(),
        rank_one: "assumed",
        fiber_min_curvature,
        fatness_margin: fat,
        verdict_positive,
        sampled_min,
    })
}
