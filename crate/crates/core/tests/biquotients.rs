use curvlab::biquot::{
    aloff_wallach_positive, baz_is_free, baz_is_positive, baz_order_h6, esch_block_conditions,
    esch_horizontal_flat_sampler, esch_integer_check, esch_is_free, esch_is_positive, esch_order_h4, BazaikinParams,
    EschenburgParams,
};
use curvlab::census::{brute_force_free_oracle, canonical_eschenburg, required_order_bound};
use curvlab::par::Exec;
use curvlab::spaces::gcd;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn esch(range: i64) -> impl Strategy<Value = EschenburgParams> {
    (prop::array::uniform3(-range..=range), -range..=range, -range..=range).prop_map(|(k, l1, l2)| {
        let l3 = k.iter().sum::<i64>() - l1 - l2;
        EschenburgParams::new(k, [l1, l2, l3]).unwrap()
    })
}

fn perm3() -> impl Strategy<Value = [usize; 3]> {
    Just(vec![0usize, 1, 2]).prop_shuffle().prop_map(|v| [v[0], v[1], v[2]])
}

fn apply<const N: usize>(v: [i64; N], p: &[usize]) -> [i64; N] {
    std::array::from_fn(|i| v[p[i]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn esch_predicates_permutation_invariant(p in esch(12), a in perm3(), b in perm3()) {
        let q = EschenburgParams::new(apply(p.k, &a), apply(p.l, &b)).unwrap();
        prop_assert_eq!(esch_is_free(&p), esch_is_free(&q));
        prop_assert_eq!(esch_is_positive(&p), esch_is_positive(&q));
        prop_assert_eq!(esch_order_h4(&p), esch_order_h4(&q));
    }

    #[test]
    fn esch_predicates_translation_invariant(p in esch(12), c in -20i64..20) {
        let q = EschenburgParams::new(p.k.map(|x| x + c), p.l.map(|x| x + c)).unwrap();
        prop_assert_eq!(esch_is_free(&p), esch_is_free(&q));
        prop_assert_eq!(esch_is_positive(&p), esch_is_positive(&q));
        prop_assert_eq!(esch_order_h4(&p), esch_order_h4(&q));
    }

    #[test]
    fn exchange_keeps_freeness_and_negates_r(p in esch(12)) {
        let q = EschenburgParams::new(p.l, p.k).unwrap();
        prop_assert_eq!(esch_is_free(&p), esch_is_free(&q));
        prop_assert_eq!(esch_order_h4(&p), -esch_order_h4(&q));
        // equal sums: at most one orientation meets the criterion
        prop_assert!(!(esch_is_positive(&p) && esch_is_positive(&q)));
    }

    #[test]
    fn canonical_form_is_orbit_invariant(p in esch(8), a in perm3(), b in perm3(), c in -9i64..9, swap in any::<bool>()) {
        let (k, l) = (apply(p.k, &a).map(|x| x + c), apply(p.l, &b).map(|x| x + c));
        let q = if swap { EschenburgParams::new(l, k) } else { EschenburgParams::new(k, l) }.unwrap();
        prop_assert_eq!(canonical_eschenburg(&p).0, canonical_eschenburg(&q).0);
    }

    #[test]
    fn blocks_and_integer_check_agree_with_criterion(p in esch(12)) {
        let blocks = esch_block_conditions(&p);
        prop_assert_eq!(blocks.iter().any(|b| *b), esch_is_positive(&p));
        prop_assert_eq!(esch_integer_check(&p).blocks, blocks);
    }

    #[test]
    fn oracle_agrees_with_gcd_criterion(p in esch(9)) {
        let b = required_order_bound(p.k, p.l);
        prop_assert_eq!(brute_force_free_oracle(p.k, p.l, b).unwrap(), esch_is_free(&p));
        if b > 1 {
            prop_assert!(brute_force_free_oracle(p.k, p.l, b - 1).is_err());
        }
    }

    #[test]
    fn aloff_wallach_is_the_l_zero_case(p in -60i64..=60, q in -60i64..=60) {
        prop_assume!(gcd(p, q) == 1);
        prop_assert_eq!(aloff_wallach_positive(p, q).unwrap(), esch_is_positive(&EschenburgParams::aloff_wallach(p, q)));
        prop_assert!(esch_is_free(&EschenburgParams::aloff_wallach(p, q)));
    }

    #[test]
    fn bazaikin_symmetric_group_invariance(q in prop::array::uniform5(-15i64..=15), perm in Just(vec![0usize, 1, 2, 3, 4]).prop_shuffle()) {
        let a = BazaikinParams { q };
        let b = BazaikinParams { q: apply(q, &perm) };
        prop_assert_eq!(baz_is_free(&a), baz_is_free(&b));
        prop_assert_eq!(baz_is_positive(&a), baz_is_positive(&b));
        prop_assert_eq!(baz_order_h6(&a).ok(), baz_order_h6(&b).ok());
    }

    #[test]
    fn bazaikin_free_implies_integral_r(q in prop::array::uniform5(-15i64..=15)) {
        let p = BazaikinParams { q };
        if baz_is_free(&p) {
            prop_assert!(baz_order_h6(&p).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampler_finds_no_flat_plane_for_positive_tuples(seed in any::<u64>()) {
        let p = positive_tuple(seed);
        let rep = esch_horizontal_flat_sampler(&p, 0.7, 10_000, seed, Exec::Parallel).unwrap();
        prop_assert!(rep.margin > 1e-6, "{:?}", rep);
    }
}

/// Free, criterion-positive tuple with entries in [-10, 10] by rejection.
fn positive_tuple(seed: u64) -> EschenburgParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k: [i64; 3] = std::array::from_fn(|_| rng.random_range(-10..=10));
        let (l1, l2) = (rng.random_range(-10..=10), rng.random_range(-10..=10));
        let l3 = k.iter().sum::<i64>() - l1 - l2;
        if !(-10..=10).contains(&l3) {
            continue;
        }
        let p = EschenburgParams::new(k, [l1, l2, l3]).unwrap();
        if esch_is_free(&p) && esch_is_positive(&p) {
            return p;
        }
    }
}

#[test]
fn sampler_sees_flat_planes_on_w10() {
    let rep =
        esch_horizontal_flat_sampler(&EschenburgParams::aloff_wallach(1, 0), 0.7, 10_000, 0, Exec::Parallel).unwrap();
    assert!(rep.margin < 1e-6);
    assert!(!rep.criterion_positive);
}

#[test]
fn sampler_is_independent_of_execution_mode() {
    let p = EschenburgParams::new([3, 1, -1], [0, 0, 3]).unwrap();
    let a = esch_horizontal_flat_sampler(&p, 0.7, 3_000, 5, Exec::Parallel).unwrap();
    let b = esch_horizontal_flat_sampler(&p, 0.7, 3_000, 5, Exec::Sequential).unwrap();
    assert_eq!(a.block_margins.map(f64::to_bits), b.block_margins.map(f64::to_bits));
}
