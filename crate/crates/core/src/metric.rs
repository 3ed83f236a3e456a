//! Left-invariant metrics `Q(P., .)` and their plane curvatures.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::liealg::{orthonormalize, Coeffs, LieAlgebraBasis, Subalgebra};

/// Symmetry tolerance on `P`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Planes with smaller Gram determinant are rejected.
pub const GRAM_TOL: f64 = 1e-14;
/// Single flatness threshold for normalized curvature and bracket norms.
pub const FLAT_EPS: f64 = 1e-9;

/// A left-invariant metric given by a symmetric positive-definite `P`.
#[derive(Debug, Clone)]
pub struct LeftInvariantMetric {
    alg: Arc<LieAlgebraBasis>,
    p: DMatrix<f64>,
    p_inv: DMatrix<f64>,
}

impl LeftInvariantMetric {
    pub fn new(alg: Arc<LieAlgebraBasis>, p: DMatrix<f64>) -> Result<Self> {
        let d = alg.dim();
        if p.nrows() != d || p.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.nrows(),
            });
        }
        let asym = (&p - p.transpose()).amax();
        if asym > SYMMETRY_TOL * (1.0 + p.amax()) {
            return Err(Error::NotPositiveDefinite(format!("asymmetry {asym:.3e}")));
        }
        let p = (&p + p.transpose()) * 0.5;
        let eig = SymmetricEigen::new(p.clone());
        let min = eig.eigenvalues.min();
        if !(min > 0.0) {
            return Err(Error::NotPositiveDefinite(format!("smallest eigenvalue {min:.3e}")));
        }
        let inv_diag = eig.eigenvalues.map(|l| 1.0 / l);
        let p_inv = &eig.eigenvectors * DMatrix::from_diagonal(&inv_diag) * eig.eigenvectors.transpose();
        Ok(LeftInvariantMetric { alg, p, p_inv })
    }

    /// The biinvariant metric `Q` itself.
    pub fn biinvariant(alg: Arc<LieAlgebraBasis>) -> Self {
        let d = alg.dim();
        LeftInvariantMetric {
            alg,
            p: DMatrix::identity(d, d),
            p_inv: DMatrix::identity(d, d),
        }
    }

    /// `P = sum_i s_i Pi_i` for mutually Q-orthogonal frames with scales `s_i`;
    /// the rest of the algebra keeps scale 1.
    pub fn from_blocks(alg: Arc<LieAlgebraBasis>, blocks: &[(&DMatrix<f64>, f64)]) -> Result<Self> {
        let d = alg.dim();
        let mut p = DMatrix::identity(d, d);
        for (frame, s) in blocks {
            if frame.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: frame.nrows(),
                });
            }
            if !(*s > 0.0) {
                return Err(Error::InvalidParameter(format!("scale {s} must be positive")));
            }
            p += (*frame * frame.transpose()) * (s - 1.0);
        }
        Self::new(alg, p)
    }

    pub fn alg(&self) -> &Arc<LieAlgebraBasis> {
        &self.alg
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn p_inv(&self) -> &DMatrix<f64> {
        &self.p_inv
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.p.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `Q(PX, Y)`.
    pub fn inner(&self, x: &Coeffs, y: &Coeffs) -> f64 {
        (&self.p * x).dot(y)
    }

    pub fn norm_sq(&self, x: &Coeffs) -> f64 {
        self.inner(x, x)
    }

    /// `|X|^2 |Y|^2 - <X,Y>^2` in this metric.
    pub fn gram_det(&self, x: &Coeffs, y: &Coeffs) -> f64 {
        let xy = self.inner(x, y);
        self.norm_sq(x) * self.norm_sq(y) - xy * xy
    }
}

/// `P_t = (P^{-1} + t Id)^{-1}`.
pub fn cheeger_deform(metric: &LeftInvariantMetric, t: f64) -> Result<LeftInvariantMetric> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("Cheeger parameter {t} must be >= 0")));
    }
    let d = metric.alg.dim();
    let inv = &metric.p_inv + DMatrix::<f64>::identity(d, d) * t;
    let eig = SymmetricEigen::new(inv.clone());
    let p =
        &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l)) * eig.eigenvectors.transpose();
    let p = (&p + p.transpose()) * 0.5;
    Ok(LeftInvariantMetric {
        alg: metric.alg.clone(),
        p,
        p_inv: inv,
    })
}

/// `P = t Pi_k + Pi_{k-perp}` with Q-orthogonal projectors.
pub fn subalgebra_scaled(sub: &Subalgebra, t: f64) -> Result<LeftInvariantMetric> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("scale {t} must be > 0")));
    }
    LeftInvariantMetric::from_blocks(sub.parent().clone(), &[(sub.frame(), t)])
}

/// `<R(X,Y)Y, X>` from the closed formula in structure constants.
pub fn unnormalized_curvature(metric: &LeftInvariantMetric, x: &Coeffs, y: &Coeffs) -> f64 {
    let alg = &metric.alg;
    let px = &metric.p * x;
    let py = &metric.p * y;
    let xy = alg.br(x, y);
    let px_y = alg.br(&px, y);
    let x_py = alg.br(x, &py);

    let t1 = 0.5 * (&px_y + &x_py).dot(&xy);
    let t2 = -0.75 * (&metric.p * &xy).dot(&xy);
    let bxy = (&x_py - &px_y) * 0.5;
    let t3 = bxy.dot(&(&metric.p_inv * &bxy));
    let bxx = alg.br(x, &px);
    let byy = alg.br(y, &py);
    let t4 = -bxx.dot(&(&metric.p_inv * &byy));
    t1 + t2 + t3 + t4
}

/// Normalized sectional curvature of `span(X, Y)`.
pub fn sectional_curvature(metric: &LeftInvariantMetric, x: &Coeffs, y: &Coeffs) -> Result<f64> {
    check_len(&metric.alg, x)?;
    check_len(&metric.alg, y)?;
    let g = metric.gram_det(x, y);
    if !(g >= GRAM_TOL) {
        return Err(Error::DegeneratePlane(g));
    }
    Ok(unnormalized_curvature(metric, x, y) / g)
}

pub(crate) fn check_len(alg: &LieAlgebraBasis, x: &Coeffs) -> Result<()> {
    if x.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Largest escape of `[m, m]` from `k`, with the offending pair of frame
/// indices of `m`.
pub fn symmetric_pair_defect(k: &Subalgebra) -> (f64, Option<(usize, usize)>) {
    let alg = k.parent();
    let m = k.complement_frame();
    let cols: Vec<Coeffs> = m.column_iter().map(|c| c.into_owned()).collect();
    let mut worst = (0.0, None);
    for (i, u) in cols.iter().enumerate() {
        for (j, v) in cols.iter().enumerate().skip(i + 1) {
            let n = k.project(&alg.br(u, v)).1.norm();
            if n > worst.0 {
                worst = (n, Some((i, j)));
            }
        }
    }
    worst
}

/// Whether `span(X, Y)` is flat for every `t < 1` in the family
/// `t Q|k + Q|m`, via `[X,Y] = [X_k,Y_k] = [X_m,Y_m] = 0`.
///
/// Requires `[m, m] ⊂ k`.
pub fn flat_plane_conditions(sub: &Subalgebra, x: &Coeffs, y: &Coeffs) -> Result<bool> {
    let alg = sub.parent();
    check_len(alg, x)?;
    check_len(alg, y)?;
    let (defect, pair) = symmetric_pair_defect(sub);
    if defect > 1e-10 {
        let (i, j) = pair.unwrap_or((0, 0));
        return Err(Error::NotSymmetricPair {
            component: format!("[m_{i}, m_{j}]"),
            norm: defect,
        });
    }
    let frame = orthonormalize(&[x.clone(), y.clone()], 1e-7);
    if frame.len() < 2 {
        let g = x.norm_squared() * y.norm_squared() - x.dot(y).powi(2);
        return Err(Error::DegeneratePlane(g));
    }
    let (u, v) = (&frame[0], &frame[1]);
    let (uk, um) = sub.project(u);
    let (vk, vm) = sub.project(v);
    Ok(alg.br(u, v).norm() < FLAT_EPS && alg.br(&uk, &vk).norm() < FLAT_EPS && alg.br(&um, &vm).norm() < FLAT_EPS)
}
