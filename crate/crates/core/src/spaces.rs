//! Named spaces and metric families used by the command line and tests.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::homspace::{HomogeneousSpec, QuotientCurvature};
use crate::liealg::{named_subalgebra, CMatrix, Coeffs, Family, LieAlgebraBasis, SubalgebraName};
use crate::metric::{subalgebra_scaled, LeftInvariantMetric, GRAM_TOL};
use crate::optimize::{MetricFamily, PlaneFn};

pub fn algebra(family: Family, n: usize) -> Result<Arc<LieAlgebraBasis>> {
    Ok(Arc::new(LieAlgebraBasis::build(family, n)?))
}

/// `SO(5)/SO(3)` with `SO(3)` acting irreducibly on R^5.
pub fn berger_b7() -> Result<HomogeneousSpec> {
    let g = algebra(Family::So, 5)?;
    let h = named_subalgebra(&g, &SubalgebraName::So3Irreducible)?;
    HomogeneousSpec::new(h, None)
}

/// `SU(3)/T^2` fibered over `SU(3)/U(2)`.
pub fn flag_w6() -> Result<HomogeneousSpec> {
    let g = algebra(Family::Su, 3)?;
    let t = named_subalgebra(&g, &SubalgebraName::Torus)?;
    let k = named_subalgebra(&g, &SubalgebraName::U2Block { slot: 2 })?;
    HomogeneousSpec::new(t, Some(k))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Aloff-Wallach space `SU(3)/diag(z^p, z^q, z^{-p-q})` over `SU(3)/U(2)`.
pub fn aloff_wallach(p: i64, q: i64) -> Result<HomogeneousSpec> {
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let g = algebra(Family::Su, 3)?;
    let h = named_subalgebra(&g, &SubalgebraName::DiagCircle(vec![p, q, -p - q]))?;
    let k = named_subalgebra(&g, &SubalgebraName::U2Block { slot: 2 })?;
    HomogeneousSpec::new(h, Some(k))
}

/// Q-orthonormal frame of the root space of `su(n)` at indices `(a, b)`.
pub fn root_space_frame(alg: &LieAlgebraBasis, a: usize, b: usize) -> Result<DMatrix<f64>> {
    let n = alg.matrix_size();
    if alg.family() != Some(Family::Su) || a >= n || b >= n || a == b {
        return Err(Error::InvalidParameter(format!(
            "no root space ({a},{b}) in {}",
            alg.name()
        )));
    }
    let mut re = CMatrix::zeros(n, n);
    re[(a, b)] = Complex::new(1.0, 0.0);
    re[(b, a)] = Complex::new(-1.0, 0.0);
    let mut im = CMatrix::zeros(n, n);
    im[(a, b)] = Complex::new(0.0, 1.0);
    im[(b, a)] = Complex::new(0.0, 1.0);
    let cols = [alg.from_matrix(&re)?, alg.from_matrix(&im)?];
    Ok(DMatrix::from_columns(&cols))
}

/// Metric on `su(3)` scaling the root spaces `(0,1)`, `(0,2)`, `(1,2)` by
/// `x[0]`, `x[1]`, `x[2]`; the torus keeps scale 1.
pub fn w6_diagonal_metric(alg: &Arc<LieAlgebraBasis>, x: [f64; 3]) -> Result<LeftInvariantMetric> {
    let f01 = root_space_frame(alg, 0, 1)?;
    let f02 = root_space_frame(alg, 0, 2)?;
    let f12 = root_space_frame(alg, 1, 2)?;
    LeftInvariantMetric::from_blocks(alg.clone(), &[(&f01, x[0]), (&f02, x[1]), (&f12, x[2])])
}

/// Plane evaluator on the full group for a left-invariant metric, in
/// P-orthonormal coordinates.
pub struct GroupCurvature {
    metric: LeftInvariantMetric,
    frame: DMatrix<f64>,
}

impl GroupCurvature {
    pub fn new(metric: LeftInvariantMetric) -> Self {
        let eig = nalgebra::SymmetricEigen::new(metric.p().clone());
        let frame = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        GroupCurvature { metric, frame }
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn metric(&self) -> &LeftInvariantMetric {
        &self.metric
    }

    pub fn eval_coords(&self, a: &Coeffs, b: &Coeffs) -> f64 {
        let (x, y) = (&self.frame * a, &self.frame * b);
        let g = self.metric.gram_det(&x, &y);
        if !(g >= GRAM_TOL) {
            return f64::NAN;
        }
        crate::metric::unnormalized_curvature(&self.metric, &x, &y) / g
    }
}

/// `g_t` on a space with intermediate subalgebra; one parameter `t`.
pub struct GtFamily {
    pub spec: HomogeneousSpec,
    pub range: (f64, f64),
}

impl MetricFamily for GtFamily {
    fn name(&self) -> String {
        "g_t".into()
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![self.range]
    }

    fn plane_dim(&self) -> usize {
        self.spec.dim()
    }

    fn curvature(&self, params: &[f64]) -> Result<PlaneFn<'_>> {
        let k = self
            .spec
            .k()
            .ok_or_else(|| Error::InvalidParameter("g_t needs an intermediate subalgebra".into()))?;
        let q = QuotientCurvature::new(subalgebra_scaled(k, params[0])?, self.spec.h())?;
        Ok(Box::new(move |a, b| q.eval_coords(a, b)))
    }
}

/// Independent scales on the three root spaces of `SU(3)/T^2`.
pub struct W6DiagonalFamily {
    pub spec: HomogeneousSpec,
    pub bounds: [(f64, f64); 3],
}

impl W6DiagonalFamily {
    pub fn new(bounds: [(f64, f64); 3]) -> Result<Self> {
        Ok(W6DiagonalFamily {
            spec: flag_w6()?,
            bounds,
        })
    }
}

impl MetricFamily for W6DiagonalFamily {
    fn name(&self) -> String {
        "w6_diagonal(x1,x2,x3)".into()
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        self.bounds.to_vec()
    }

    fn plane_dim(&self) -> usize {
        self.spec.dim()
    }

    fn curvature(&self, params: &[f64]) -> Result<PlaneFn<'_>> {
        if params.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: params.len(),
            });
        }
        let metric = w6_diagonal_metric(self.spec.g(), [params[0], params[1], params[2]])?;
        let q = QuotientCurvature::new(metric, self.spec.h())?;
        Ok(Box::new(move |a, b| q.eval_coords(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_spaces_partition_off_diagonal() {
        let g = algebra(Family::Su, 3).unwrap();
        let t = named_subalgebra(&g, &SubalgebraName::Torus).unwrap();
        let mut cols: Vec<Coeffs> = t.vectors();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let f = root_space_frame(&g, a, b).unwrap();
            cols.extend(f.column_iter().map(|c| c.into_owned()));
        }
        let m = DMatrix::from_columns(&cols);
        assert!((m.transpose() * &m - DMatrix::identity(8, 8)).amax() < 1e-12);
    }

    #[test]
    fn g_t_is_diagonal_member() {
        let spec = flag_w6().unwrap();
        let a = crate::homspace::g_t_metric(&spec, 0.37).unwrap();
        let b = w6_diagonal_metric(spec.g(), [0.37, 1.0, 1.0]).unwrap();
        // torus scales differ; compare on the complement of the torus
        let c = spec.tangent_frame();
        assert!((c.transpose() * (a.p() - b.p()) * &c).amax() < 1e-12);
    }

    #[test]
    fn aloff_wallach_requires_coprime() {
        assert!(matches!(aloff_wallach(2, 4), Err(Error::NotCoprime { .. })));
        assert!(aloff_wallach(1, 1).is_ok());
    }

    #[test]
    fn b7_dimensions() {
        let b7 = berger_b7().unwrap();
        assert_eq!(b7.dim(), 7);
        assert!(!b7.symmetric_base());
    }
}
