use std::sync::Arc;

use curvlab::liealg::{named_subalgebra, Coeffs, Family, LieAlgebraBasis, Subalgebra, SubalgebraName};
use curvlab::metric::{
    cheeger_deform, sectional_curvature, subalgebra_scaled, unnormalized_curvature, LeftInvariantMetric,
};
use proptest::prelude::*;

fn alg(f: Family, n: usize) -> Arc<LieAlgebraBasis> {
    Arc::new(LieAlgebraBasis::build(f, n).unwrap())
}

fn vec_in(d: usize) -> impl Strategy<Value = Coeffs> {
    prop::collection::vec(-1.0f64..1.0, d).prop_map(Coeffs::from_vec)
}

fn pair(d: usize) -> impl Strategy<Value = (Coeffs, Coeffs)> {
    (vec_in(d), vec_in(d)).prop_filter("independent", |(x, y)| {
        let g = x.norm_squared() * y.norm_squared() - x.dot(y).powi(2);
        g > 1e-3
    })
}

/// Random SPD operator with eigenvalues in [0.3, 3].
fn spd(d: usize) -> impl Strategy<Value = nalgebra::DMatrix<f64>> {
    (
        prop::collection::vec(-1.0f64..1.0, d * d),
        prop::collection::vec(0.3f64..3.0, d),
    )
        .prop_map(move |(a, ev)| {
            let a = nalgebra::DMatrix::from_vec(d, d, a);
            let q = a.qr().q();
            &q * nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ev)) * q.transpose()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unnormalized_scales_quadratically((x, y) in pair(8), a in -3.0f64..3.0, b in -3.0f64..3.0, p in spd(8)) {
        let m = LeftInvariantMetric::new(alg(Family::Su, 3), p).unwrap();
        let k = unnormalized_curvature(&m, &x, &y);
        let ks = unnormalized_curvature(&m, &(&x * a), &(&y * b));
        prop_assert!((ks - a * a * b * b * k).abs() <= 1e-9 * (1.0 + k.abs() * a * a * b * b));
    }

    #[test]
    fn sectional_depends_only_on_plane((x, y) in pair(8), c in prop::array::uniform4(-2.0f64..2.0), p in spd(8)) {
        let det = c[0] * c[3] - c[1] * c[2];
        prop_assume!(det.abs() > 0.2);
        let m = LeftInvariantMetric::new(alg(Family::Su, 3), p).unwrap();
        let u = &x * c[0] + &y * c[1];
        let v = &x * c[2] + &y * c[3];
        let k1 = sectional_curvature(&m, &x, &y).unwrap();
        let k2 = sectional_curvature(&m, &u, &v).unwrap();
        prop_assert!((k1 - k2).abs() < 1e-7 * (1.0 + k1.abs()), "{} vs {}", k1, k2);
    }

    #[test]
    fn sectional_is_symmetric((x, y) in pair(10), p in spd(10)) {
        let m = LeftInvariantMetric::new(alg(Family::So, 5), p).unwrap();
        let a = sectional_curvature(&m, &x, &y).unwrap();
        let b = sectional_curvature(&m, &y, &x).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn shrinking_a_subalgebra_keeps_nonnegative((x, y) in pair(8), t in 0.05f64..=1.0, which in 0usize..3) {
        let g = alg(Family::Su, 3);
        let name = [SubalgebraName::Torus, SubalgebraName::U2Block { slot: 2 }, SubalgebraName::Su2Block][which].clone();
        let k = named_subalgebra(&g, &name).unwrap();
        let m = subalgebra_scaled(&k, t).unwrap();
        prop_assert!(sectional_curvature(&m, &x, &y).unwrap() >= -1e-10);
    }

    #[test]
    fn abelian_scaling_up_to_four_thirds((x, y) in pair(8), t in 1.0f64..=4.0 / 3.0) {
        let g = alg(Family::Su, 3);
        let k = named_subalgebra(&g, &SubalgebraName::Torus).unwrap();
        let m = subalgebra_scaled(&k, t).unwrap();
        prop_assert!(sectional_curvature(&m, &x, &y).unwrap() >= -1e-10);
    }

    #[test]
    fn cheeger_preserves_nonnegativity((x, y) in pair(8), t in 0.1f64..=1.0, s in 0.0f64..5.0) {
        let g = alg(Family::Su, 3);
        let k = named_subalgebra(&g, &SubalgebraName::U2Block { slot: 2 }).unwrap();
        let m = cheeger_deform(&subalgebra_scaled(&k, t).unwrap(), s).unwrap();
        prop_assert!(sectional_curvature(&m, &x, &y).unwrap() >= -1e-10);
    }

    #[test]
    fn cheeger_eigenvalue_law(p in spd(8), t in 0.0f64..4.0) {
        let m = LeftInvariantMetric::new(alg(Family::Su, 3), p).unwrap();
        let mut want: Vec<f64> = m.eigenvalues().iter().map(|l| l / (1.0 + t * l)).collect();
        let mut got = cheeger_deform(&m, t).unwrap().eigenvalues();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in want.iter().zip(&got) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn berger_sphere_crosses_zero_at_four_thirds() {
    let g = alg(Family::Su, 2);
    let e = |i| Coeffs::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 });
    let k = Subalgebra::new(g, &[e(0)], Some("e1")).unwrap();
    let at = |t: f64| sectional_curvature(&subalgebra_scaled(&k, t).unwrap(), &e(1), &e(2)).unwrap();
    assert!(at(4.0 / 3.0).abs() < 1e-12);
    assert!(at(1.5) < 0.0);
    assert!(at(1.2) > 0.0);
}

#[test]
fn biinvariant_is_quarter_bracket_on_sp2() {
    let g = alg(Family::Sp, 2);
    let m = LeftInvariantMetric::biinvariant(g.clone());
    let d = g.dim();
    for i in 0..d {
        for j in (i + 1)..d {
            let e = |k| Coeffs::from_fn(d, |r, _| if r == k { 1.0 } else { 0.0 });
            let k = sectional_curvature(&m, &e(i), &e(j)).unwrap();
            let want = 0.25 * g.br(&e(i), &e(j)).norm_squared();
            assert!((k - want).abs() < 1e-12);
        }
    }
}
