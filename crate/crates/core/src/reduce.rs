//! Argument reduction for integer angles.
//!
//! For an index n the reduction finds the integer a nearest to
//! (n − π/2) / (2π) and encloses θ = n − (4a + 1)·(π/2), which satisfies
//! sin n = cos θ and places θ within [−π − ε, π + ε]. The subtraction
//! cancels roughly log₂(n) leading bits, so all interval work runs at an
//! internal precision of p + bit_length(n) + 16; the returned enclosure
//! keeps that internal precision so callers can continue without a lossy
//! re-rounding.

use astro_float::{BigFloat, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::interval::{bf_u64, Interval};
use crate::pi::pi_enclosure;
use crate::precision::{bit_length, PrecisionBits};
use crate::Ctx;

/// Largest accepted index: reductions are specified for n < 2⁶³.
pub(crate) const MAX_INDEX: u64 = (1u64 << 63) - 1;

/// The outcome of reducing an index n modulo the quarter-period grid.
#[derive(Debug, Clone)]
pub struct ReducedAngle {
    /// The index that was reduced.
    pub n: u64,
    /// Nearest integer to (n − π/2) / (2π).
    pub a: i64,
    /// Enclosure of n − (4a + 1)·(π/2) at the internal working precision.
    pub theta: Interval,
}

/// Truncates an integer-valued BigFloat to i64.
fn integer_part_i64(x: &BigFloat) -> Result<i64> {
    if x.is_zero() {
        return Ok(0);
    }
    let (words, _p, sign, e, _) = x
        .as_raw_parts()
        .ok_or(Error::Numeric("non-finite value in angle reduction"))?;
    if e <= 0 {
        return Ok(0);
    }
    let e = e as usize;
    if e > 63 {
        return Err(Error::Numeric("integer overflow in angle reduction"));
    }
    let msw = *words.last().expect("nonzero value has mantissa words");
    let v = (msw >> (64 - e)) as i64;
    Ok(if sign == Sign::Neg { -v } else { v })
}

/// Reduces n against the quarter-period grid at target precision `p`.
///
/// The enclosure of θ is valid unconditionally; its width is bounded by
/// 2^(−p+2) and in practice is far smaller because the internal headroom
/// more than absorbs the cancellation of the leading bits of n.
pub fn reduce(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<ReducedAngle> {
    if n == 0 || n > MAX_INDEX {
        return Err(Error::InvalidIndex(n));
    }
    let pw = p.plus(bit_length(n) + 16);

    // Point estimate of q = (n − π/2) / (2π); only the nearest integer is
    // extracted from it, and the enclosure below is rigorous regardless of
    // which neighbor is picked in a near-tie.
    let pi_point = ctx.cc.pi(pw.p(), RoundingMode::ToEven);
    let half_pi_point = {
        let mut v = pi_point.clone();
        let e = v.exponent().expect("pi is finite");
        v.set_exponent(e - 1);
        v
    };
    let two_pi_point = {
        let mut v = pi_point;
        let e = v.exponent().expect("pi is finite");
        v.set_exponent(e + 1);
        v
    };
    let num = bf_u64(n).sub(&half_pi_point, pw.p(), RoundingMode::ToEven);
    let q = num.div(&two_pi_point, pw.p(), RoundingMode::ToEven);
    let half = {
        let mut h = BigFloat::from_word(1, 64);
        h.set_exponent(0);
        h
    };
    let a = integer_part_i64(&q.add(&half, pw.p(), RoundingMode::ToEven).floor())?;

    // θ = n − (4a + 1)·(π/2), everything enclosed.
    let half_pi = pi_enclosure(pw, ctx).scale2(-1);
    let multiple = Interval::from_i64(4 * a + 1).mul(&half_pi, pw);
    let theta = Interval::from_u64(n).sub(&multiple, pw);

    // A correct reduction never leaves |θ| far above π; anything larger
    // indicates an internal defect rather than a data-dependent condition.
    let bound = BigFloat::from_f64(3.15, 64);
    let abs_theta = theta.abs();
    if crate::interval::cmp_bf(abs_theta.hi(), &bound) == core::cmp::Ordering::Greater {
        return Err(Error::Numeric("angle reduction out of range"));
    }

    Ok(ReducedAngle { n, a, theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f64conv::{f64_down, f64_up};

    fn p96() -> PrecisionBits {
        PrecisionBits::new(96).unwrap()
    }

    /// (n, expected a, θ to f64 accuracy).
    const SAMPLES: [(u64, i64, f64); 5] = [
        (1, 0, -0.5707963267948966),
        (5, 1, -2.853981633974483),
        (8, 1, 0.1460183660255172),
        (11, 2, -3.137166941154069),
        (12, 2, -2.137166941154069),
    ];

    #[test]
    fn matches_double_precision_reductions() {
        let mut ctx = Ctx::new();
        for &(n, a, theta) in &SAMPLES {
            let r = reduce(n, p96(), &mut ctx).unwrap();
            assert_eq!(r.a, a, "n={n}");
            assert!(
                (f64_down(r.theta.lo()) - theta).abs() < 1e-12,
                "n={n} lo={}",
                f64_down(r.theta.lo())
            );
            assert!((f64_up(r.theta.hi()) - theta).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn reconstruction_contains_the_index() {
        let mut ctx = Ctx::new();
        for n in [1u64, 7, 100, 12345, 99_999_989, 1_000_000_007] {
            let r = reduce(n, p96(), &mut ctx).unwrap();
            let pw = p96().plus(bit_length(n) + 16);
            let half_pi = pi_enclosure(pw, &mut ctx).scale2(-1);
            let back = r
                .theta
                .add(&Interval::from_i64(4 * r.a + 1).mul(&half_pi, pw), pw);
            assert!(back.contains_bf(&bf_u64(n)), "n={n}");
        }
    }

    #[test]
    fn width_stays_within_contract() {
        let mut ctx = Ctx::new();
        let budget = (2.0f64).powi(-96 + 2);
        for n in [1u64, 999, 1_000_003, 10_000_000_019, 1_000_000_000_000_000_003] {
            let r = reduce(n, p96(), &mut ctx).unwrap();
            let w = f64_up(&r.theta.width_up(p96()));
            assert!(w <= budget, "n={n} width={w}");
            assert!(f64_up(r.theta.abs().hi()) <= 3.15);
        }
    }

    #[test]
    fn rejects_out_of_range_indices() {
        let mut ctx = Ctx::new();
        assert!(matches!(
            reduce(0, p96(), &mut ctx),
            Err(Error::InvalidIndex(0))
        ));
        assert!(matches!(
            reduce(1u64 << 63, p96(), &mut ctx),
            Err(Error::InvalidIndex(_))
        ));
    }

    #[test]
    fn doubling_precision_nests() {
        let mut ctx = Ctx::new();
        for n in [3u64, 11, 355, 104348] {
            let coarse = reduce(n, p96(), &mut ctx).unwrap();
            let fine = reduce(n, p96().doubled(), &mut ctx).unwrap();
            assert!(fine.theta.is_subset_of(&coarse.theta), "n={n}");
        }
    }
}
