//! Property tests for the interval layer and the operations above it.
//!
//! The arithmetic properties compare against exact dyadic rationals from
//! the oracle layer; everything else checks structural invariants —
//! containment under precision changes, monotonicity, prefix stability —
//! that must hold for any correct implementation.

mod common;

use common::{dyadic_of_bigfloat, dyadic_of_f64, Dyadic};
use proptest::prelude::*;
use sintail_core::{
    partial_sum, pi_enclosure, reduce, sin_enclosure, term_certified, term_fast, threshold,
    wild_up_to, Ctx, Engine, Interval, PrecisionBits,
};

fn p(bits: u32) -> PrecisionBits {
    PrecisionBits::new(bits).unwrap()
}

fn bf(x: f64) -> astro_float::BigFloat {
    astro_float::BigFloat::from_f64(x, 64)
}

/// Interval spanning the two doubles, in either order.
fn iv(a: f64, b: f64) -> Interval {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::from_endpoints(bf(lo), bf(hi)).unwrap()
}

/// True when the exact rational `x` lies inside `i`.
fn dy_inside(x: &Dyadic, i: &Interval) -> bool {
    dyadic_of_bigfloat(i.lo()).le(x) && x.le(&dyadic_of_bigfloat(i.hi()))
}

/// Doubles that the substrate parses exactly: normal or zero.
fn normal_f64() -> impl Strategy<Value = f64> {
    (-1.0e12f64..1.0e12).prop_filter("normal or zero", |x| *x == 0.0 || x.is_normal())
}

proptest! {
    #[test]
    fn sums_and_products_of_corners_stay_inside(
        a in normal_f64(), b in normal_f64(),
        c in normal_f64(), d in normal_f64(),
    ) {
        let x = iv(a, b);
        let y = iv(c, d);
        let sum = x.add(&y, p(96));
        let dif = x.sub(&y, p(96));
        let prod = x.mul(&y, p(96));
        for ex in [a, b] {
            for ey in [c, d] {
                let dx = dyadic_of_f64(ex);
                let dy = dyadic_of_f64(ey);
                prop_assert!(dy_inside(&dx.add(&dy), &sum));
                prop_assert!(dy_inside(&dx.sub(&dy), &dif));
                prop_assert!(dy_inside(&dx.mul(&dy), &prod));
            }
        }
    }

    #[test]
    fn quotients_of_corners_stay_inside(
        a in normal_f64(), b in normal_f64(),
        c in normal_f64().prop_filter("away from zero", |x| x.abs() > 1.0e-6),
        w in 0.0f64..1.0,
    ) {
        // Divisor interval on one side of zero: [c, c + |c|·w] or mirrored.
        let c2 = c + c.abs() * w * 0.5;
        let x = iv(a, b);
        let y = iv(c, c2);
        let quot = x.div(&y, p(96)).unwrap();
        for ex in [a, b] {
            for ey in [c, c2] {
                // Exact rational corner versus the enclosure: compare
                // ex/ey against endpoints by cross-multiplication, i.e.
                // check ex − lo·ey and hi·ey − ex keep the right signs.
                let lo = dyadic_of_bigfloat(quot.lo());
                let hi = dyadic_of_bigfloat(quot.hi());
                let dex = dyadic_of_f64(ex);
                let dey = dyadic_of_f64(ey);
                if ey > 0.0 {
                    prop_assert!(lo.mul(&dey).le(&dex));
                    prop_assert!(dex.le(&hi.mul(&dey)));
                } else {
                    prop_assert!(dex.le(&lo.mul(&dey)));
                    prop_assert!(hi.mul(&dey).le(&dex));
                }
            }
        }
    }

    #[test]
    fn unit_interval_powers_are_contained_and_stay_unit(
        a in 0.0f64..1.0, b in 0.0f64..1.0, k in 1u32..9,
    ) {
        let x = iv(a, b);
        let pw = x.pow_uint(k as u64, p(96));
        let zero = Interval::from_u64(0);
        let one = Interval::from_u64(1);
        prop_assert!(pw.is_subset_of(&Interval::from_endpoints(
            zero.lo().clone(), one.hi().clone()).unwrap()));
        for ex in [a, b] {
            prop_assert!(dy_inside(&dyadic_of_f64(ex).pow(k), &pw));
        }
    }

    #[test]
    fn arithmetic_nests_when_precision_doubles(
        a in normal_f64(), b in normal_f64(),
        c in normal_f64(), d in normal_f64(),
    ) {
        let x = iv(a, b);
        let y = iv(c, d);
        prop_assert!(x.add(&y, p(192)).is_subset_of(&x.add(&y, p(96))));
        prop_assert!(x.mul(&y, p(192)).is_subset_of(&x.mul(&y, p(96))));
    }

    #[test]
    fn exact_doubles_round_trip_through_directed_conversion(x in normal_f64()) {
        prop_assert_eq!(sintail_core::f64_down(&bf(x)), x);
        prop_assert_eq!(sintail_core::f64_up(&bf(x)), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_reconstructs_the_index(n in 1u64..1_000_000_000_000) {
        let mut ctx = Ctx::new();
        let pw = p(160);
        let r = reduce(n, p(96), &mut ctx).unwrap();
        let half_pi = pi_enclosure(pw, &mut ctx).scale2(-1);
        let center = Interval::from_i64(4 * r.a + 1).mul(&half_pi, pw);
        let back = center.add(&r.theta, pw);
        prop_assert!(back.contains_bf(&astro_float::BigFloat::from_u64(n, 64)));
    }

    #[test]
    fn sine_enclosures_nest_when_precision_doubles(n in 1u64..1_000_000_000) {
        let mut ctx = Ctx::new();
        let coarse = sin_enclosure(n, p(96), &mut ctx).unwrap();
        let fine = sin_enclosure(n, p(192), &mut ctx).unwrap();
        prop_assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn verdicts_are_stable_under_precision_doubling(n in 1u64..1_000_000) {
        let mut ctx = Ctx::new();
        let a = sintail_core::classify_with(
            n, p(96), sintail_core::DEFAULT_PRECISION_CEILING, &mut ctx).unwrap();
        let b = sintail_core::classify_with(
            n, p(192), sintail_core::DEFAULT_PRECISION_CEILING, &mut ctx).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn thresholds_decrease(n in 1u64..1_000_000) {
        let t1 = threshold(n, p(96)).unwrap();
        let t2 = threshold(n + 1, p(96)).unwrap();
        prop_assert!(sintail_core::f64_down(t2.hi()) <= sintail_core::f64_up(t1.hi()));
    }

    #[test]
    fn wild_tables_are_prefix_stable(a in 1u64..1500, b in 1u64..1500) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let mut ctx = Ctx::new();
        let small = wild_up_to(a, p(96), &mut ctx).unwrap();
        let large = wild_up_to(b, p(96), &mut ctx).unwrap();
        prop_assert!(large.wilds().starts_with(small.wilds()));
    }

    #[test]
    fn fast_terms_stay_near_certified_terms(n in 1u64..5_000_000) {
        let mut ctx = Ctx::new();
        let fast = term_fast(n, &mut ctx).unwrap();
        let cert = term_certified(n, p(128), &mut ctx).unwrap();
        // |fast − cert| ≤ cert.hi·n·2⁻⁹⁰ + 2⁻⁹⁰, checked in wide precision.
        let rm = astro_float::RoundingMode::Up;
        let diff = fast.value.lo().sub(&cert.value.midpoint(p(128)), 160, rm).abs();
        let mut floor = astro_float::BigFloat::from_word(1, 64);
        floor.set_exponent(-89);
        let bound = cert
            .value
            .hi()
            .mul(&astro_float::BigFloat::from_u64(n, 64), 160, rm)
            .mul(&floor, 160, rm)
            .add(&floor, 160, rm);
        prop_assert!(diff.cmp(&bound).is_some_and(|c| c <= 0));
    }

    #[test]
    fn adjacent_partial_sums_overlap_after_one_step(n in 1u64..400) {
        let mut ctx = Ctx::new();
        let a = partial_sum(n, Engine::Certified, p(96), &mut ctx).unwrap();
        let b = partial_sum(n + 1, Engine::Certified, p(96), &mut ctx).unwrap();
        let t = term_certified(n + 1, p(96), &mut ctx).unwrap();
        // Both enclose the same true value, so they must intersect.
        let stepped = a.value.add(&t.value, p(96));
        prop_assert!(stepped.intersect(&b.value).is_ok());
    }
}
