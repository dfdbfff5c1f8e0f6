//! Directed conversion from multi-precision values to `f64`.
//!
//! Upper and lower tail bounds leave the crate as `f64`; converting them
//! with round-to-nearest could round an upper bound down and break its
//! guarantee. These helpers extract the top mantissa bits and make the
//! rounding decision explicitly, so the result is the true directed
//! rounding of the multi-precision value, including across the subnormal
//! and overflow ranges.

use astro_float::{BigFloat, Sign};

#[derive(Clone, Copy, PartialEq)]
enum Dir {
    Down,
    Up,
}

/// Largest f64 ≤ the exact value of `v` (round toward −∞).
pub fn f64_down(v: &BigFloat) -> f64 {
    convert(v, Dir::Down)
}

/// Smallest f64 ≥ the exact value of `v` (round toward +∞).
pub fn f64_up(v: &BigFloat) -> f64 {
    convert(v, Dir::Up)
}

/// Exact f64 of the form 2^j for j in [−1074, 1023].
fn pow2(j: i64) -> f64 {
    debug_assert!((-1074..=1023).contains(&j));
    if j >= -1022 {
        f64::from_bits(((j + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (j + 1074))
    }
}

fn convert(v: &BigFloat, dir: Dir) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if v.is_zero() {
        return 0.0;
    }
    let (words, _p, sign, e, _inexact) = v.as_raw_parts().expect("finite nonzero value");
    let e = e as i64;
    let negative = sign == Sign::Neg;
    // Overflow: |v| ≥ 2^1024 ⇔ e ≥ 1025 (value = 0.m·2^e with m ≥ 1/2).
    if e - 1 > 1023 {
        return match (negative, dir) {
            (false, Dir::Down) => f64::MAX,
            (false, Dir::Up) => f64::INFINITY,
            (true, Dir::Down) => f64::NEG_INFINITY,
            (true, Dir::Up) => f64::MIN,
        };
    }
    // Available significand bits in the f64 target at this magnitude:
    // 53 in the normal range, shrinking once the value dips below 2^−1022.
    let target_bits = if e > -1022 { 53 } else { 53 + (e + 1021) };
    if target_bits <= 0 {
        // |v| below half the smallest subnormal scale: rounds to 0 toward
        // zero and to the minimal subnormal away from zero.
        let min_sub = f64::from_bits(1);
        return match (negative, dir) {
            (false, Dir::Down) => 0.0,
            (false, Dir::Up) => min_sub,
            (true, Dir::Down) => -min_sub,
            (true, Dir::Up) => -0.0,
        };
    }
    let k = target_bits.min(53) as u32;
    // Top k mantissa bits and a sticky flag for everything below them.
    // words are little-endian; the most significant word has its top bit set.
    let msw = words[words.len() - 1];
    let mut top = msw >> (64 - k);
    let mut sticky = (msw & ((1u64 << (64 - k)) - 1)) != 0;
    if !sticky {
        sticky = words[..words.len() - 1].iter().any(|&w| w != 0);
    }
    // Round the magnitude: toward zero keeps `top`; away from zero bumps it
    // when any discarded bit was set.
    let away = matches!((negative, dir), (false, Dir::Up) | (true, Dir::Down));
    let mut exp = e - k as i64;
    if away && sticky {
        top += 1;
        if top == (1u64 << k) {
            top >>= 1;
            exp += 1;
        }
    }
    // top·2^exp is exactly representable by construction, so this product
    // performs no host rounding.
    let magnitude = if exp >= 0 {
        if exp > 1023 {
            // Rounding up at the very top of the range can overflow.
            return if negative { f64::MIN } else { f64::INFINITY };
        }
        top as f64 * pow2(exp)
    } else {
        top as f64 * pow2(exp.max(-1074))
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}
