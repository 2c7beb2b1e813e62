//! Structural invariants as property tests.

mod common;

use common::*;
use corrdyn::algset::AlgSet;
use corrdyn::dynamics::{growth_check, if_lower_bound, invariant_from_identity, Correspondence};
use corrdyn::expr::parse_poly;
use corrdyn::heights::{enumerate_rational_points, mahler_measure, weil_height};
use corrdyn::maps::{compose_maps, pullback_set, pushforward_set, verify_rh_bound, RationalMap};
use corrdyn::point::ProjPoint;
use corrdyn::poly::{
    compose_fraction, content_primitive, gcd_poly, resultant, squarefree_part, IntPoly,
};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn coeffs(max_len: usize, c: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-c..=c, 1..=max_len).prop_map(|v| p(&v))
}

fn nonzero(max_len: usize, c: i64) -> impl Strategy<Value = IntPoly> {
    coeffs(max_len, c).prop_filter("nonzero", |q| !q.is_zero())
}

fn nonconstant(max_len: usize, c: i64) -> impl Strategy<Value = IntPoly> {
    coeffs(max_len, c).prop_filter("nonconstant", |q| !q.is_constant())
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(500))]

    #[test]
    fn render_then_parse_round_trips(a in coeffs(12, 1_000_000_000)) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(cfg(96))]

    #[test]
    fn content_times_primitive_is_input(a in nonzero(8, 50)) {
        let (c, q) = content_primitive(&a).unwrap();
        prop_assert!(c.is_positive());
        prop_assert_eq!(q.scale(&c), a);
    }

    #[test]
    fn gcd_divides_and_absorbs_common_factor(a in nonzero(6, 20), b in nonzero(6, 20), g in nonconstant(3, 5)) {
        let (ga, gb) = (&a * &g, &b * &g);
        let d = gcd_poly(&ga, &gb).unwrap();
        prop_assert!(d.divides(&ga) && d.divides(&gb));
        prop_assert!(g.divides(&d));
        prop_assert!(d.leading().unwrap().is_positive());
    }

    #[test]
    fn squarefree_part_ignores_multiplicity(a in nonconstant(4, 6), b in nonzero(4, 6)) {
        let once = squarefree_part(&(&a * &b)).unwrap();
        let twice = squarefree_part(&(&(&a * &a) * &b)).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn resultant_sign_and_multiplicativity(a in nonconstant(5, 9), b in nonconstant(5, 9), c in nonconstant(4, 9)) {
        let rab = resultant(&a, &b).unwrap();
        let rba = resultant(&b, &a).unwrap();
        let sign = if (a.deg() * b.deg()) % 2 == 1 { -BigInt::from(1) } else { BigInt::from(1) };
        prop_assert_eq!(&rab, &(&sign * &rba));
        let rbc = resultant(&a, &(&b * &c)).unwrap();
        prop_assert_eq!(rbc, &rab * &resultant(&a, &c).unwrap());
    }

    #[test]
    fn compose_fraction_with_unit_denominator_is_composition(a in nonzero(5, 9), f in nonzero(4, 9), x in -20i64..=20) {
        let comp = compose_fraction(&a, &f, &IntPoly::one(), a.deg()).unwrap();
        prop_assert_eq!(comp.eval(&big(x)), a.eval(&f.eval(&big(x))));
    }

    #[test]
    fn mahler_measure_is_additive_on_products(a in nonzero(6, 100), b in nonzero(6, 100)) {
        let lhs = mahler_measure(&(&a * &b)).unwrap().value;
        let rhs = mahler_measure(&a).unwrap().value + mahler_measure(&b).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn power_maps_scale_weil_height(num in -10_000i64..=10_000, den in 1i64..=10_000, d in 1usize..=5) {
        let x = ProjPoint::ratio(num, den);
        let y = RationalMap::power(d).eval(&x);
        let gap = weil_height(&y).value - d as f64 * weil_height(&x).value;
        prop_assert!(gap.abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn pushforward_undoes_pullback(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = rational_map(&mut r, 3, 12);
        let size = r.gen_range(0..=4);
        let s = random_set(&mut r, size, 12);
        prop_assert_eq!(pushforward_set(&f, &pullback_set(&f, &s)), s);
    }

    #[test]
    fn pullback_is_contravariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = rational_map(&mut r, 2, 6);
        let g = rational_map(&mut r, 2, 6);
        let size = r.gen_range(1..=3);
        let s = random_set(&mut r, size, 6);
        let direct = pullback_set(&compose_maps(&f, &g), &s);
        prop_assert_eq!(direct, pullback_set(&g, &pullback_set(&f, &s)));
    }

    #[test]
    fn preimage_cardinality_and_membership(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = rational_map(&mut r, 3, 10);
        let size = r.gen_range(1..=4);
        let s = random_set(&mut r, size, 10);
        let rh = verify_rh_bound(&f, &s);
        prop_assert!(rh.holds);
        let pre = pullback_set(&f, &s);
        for x in pre.rational_points().unwrap() {
            prop_assert!(s.contains(&f.eval(&x)));
        }
    }

    #[test]
    fn growth_beyond_threshold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3usize);
        let m = r.gen_range(1..n);
        let c = Correspondence::new(polynomial_map(&mut r, n, 4), polynomial_map(&mut r, m, 4));
        let threshold = (2 * n - 2) as f64 / (n - m) as f64;
        let k = rational_set(&mut r, threshold.floor() as usize + 1, 5);
        let g = growth_check(&c, &k, 2, 5000).unwrap();
        prop_assert!(g.holds);
        for s in &g.steps {
            prop_assert!(s.cardinality > s.previous);
            prop_assert_eq!(s.if_lower_bound, if_lower_bound(n, m, s.previous));
        }
    }

    #[test]
    fn identity_gives_invariant_set(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=4usize);
        let a = rational_map(&mut r, 2, 5);
        let zeta = if d % 2 == 0 { -1 } else { 1 };
        let b = a.scaled(zeta, 1).unwrap();
        let size = r.gen_range(1..=2);
        let k_hat = random_set(&mut r, size, 5);
        let inv = invariant_from_identity(&RationalMap::power(d), &a, &b, &k_hat).unwrap();
        prop_assert!(inv.verified);
    }
}

#[test]
fn cyclotomic_polynomials_have_zero_measure() {
    for n in 1..=24usize {
        let mut v = vec![0i64; n + 1];
        v[0] = -1;
        v[n] = 1;
        assert!(
            mahler_measure(&p(&v)).unwrap().value.abs() <= 1e-12,
            "z^{n} - 1"
        );
    }
}

#[test]
fn enumeration_is_monotone_and_bounded() {
    let mut previous = Vec::new();
    for b in 1..=12u32 {
        let bound = (b as f64).ln();
        let pts = enumerate_rational_points(bound).unwrap();
        assert!(pts.iter().all(|x| weil_height(x).value <= bound + 1e-12));
        assert!(previous.iter().all(|x| pts.binary_search(x).is_ok()));
        assert!(pts.len() >= previous.len());
        previous = pts;
    }
    assert!(previous.contains(&ProjPoint::ratio(-7, 12)));
    assert!(AlgSet::from_points(&previous).cardinality() == previous.len());
}
