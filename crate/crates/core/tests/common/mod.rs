//! Independent oracles used by the integration tests.
//!
//! Everything in this module is deliberately built on foundations that do
//! not touch the library under test: integer arithmetic over `num-bigint`
//! for π bounds, and plain `f64` math for classification, terms and sums.
//! The oracles were written and frozen against known constants before the
//! library internals, so a library bug and an oracle bug cannot share a
//! common cause.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};

/// First 100 decimal digits of π (integer form: π ≈ PI_DECIMAL_DIGITS / 10⁹⁹).
pub const PI_DECIMAL_DIGITS: &str =
    "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067";

/// Rigorous integer bounds on atan(1/x)·2^shift by the alternating Leibniz
/// series with floored integer terms. Returns (lo, hi) with the true value
/// strictly inside. The slack term covers both the per-term floor error and
/// the truncated tail.
fn atan_inv_scaled(x: u64, shift: u32) -> (BigInt, BigInt) {
    let x2 = BigUint::from(x * x);
    let mut denom_pow = BigUint::from(x);
    let mut sum = BigInt::from(0);
    let mut j: u64 = 0;
    let mut terms: u64 = 0;
    loop {
        let d = &denom_pow * BigUint::from(2 * j + 1);
        let term = (BigUint::from(1u8) << shift) / d;
        if term == BigUint::from(0u8) {
            break;
        }
        let signed = BigInt::from(term);
        if j.is_multiple_of(2) {
            sum += signed;
        } else {
            sum -= signed;
        }
        denom_pow *= &x2;
        j += 1;
        terms += 1;
    }
    let slack = BigInt::from(terms + 4);
    (&sum - &slack, &sum + &slack)
}

/// Rigorous integer bounds on π·2^shift via Machin's formula
/// π = 16·atan(1/5) − 4·atan(1/239).
pub fn machin_pi_scaled(shift: u32) -> (BigInt, BigInt) {
    let (a_lo, a_hi) = atan_inv_scaled(5, shift);
    let (b_lo, b_hi) = atan_inv_scaled(239, shift);
    let lo = BigInt::from(16) * a_lo - BigInt::from(4) * b_hi;
    let hi = BigInt::from(16) * a_hi - BigInt::from(4) * b_lo;
    (lo, hi)
}

/// A rational of the form num·2^exp2, for exact comparisons against
/// multi-precision binary floats.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub num: BigInt,
    pub exp2: i64,
}

impl Dyadic {
    pub fn new(num: BigInt, exp2: i64) -> Self {
        Dyadic { num, exp2 }
    }

    /// Compares two dyadics exactly by aligning their scales.
    pub fn cmp(&self, other: &Dyadic) -> core::cmp::Ordering {
        let (a, b) = if self.exp2 >= other.exp2 {
            (
                &self.num << (self.exp2 - other.exp2) as u64,
                other.num.clone(),
            )
        } else {
            (
                self.num.clone(),
                &other.num << (other.exp2 - self.exp2) as u64,
            )
        };
        a.cmp(&b)
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        self.cmp(other) != core::cmp::Ordering::Greater
    }

    /// Exact difference, aligned to the finer scale.
    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp2.min(other.exp2);
        let a = &self.num << (self.exp2 - e) as u64;
        let b = &other.num << (other.exp2 - e) as u64;
        Dyadic::new(a - b, e)
    }

    /// Exact sum, aligned to the finer scale.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp2.min(other.exp2);
        let a = &self.num << (self.exp2 - e) as u64;
        let b = &other.num << (other.exp2 - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp2 + other.exp2)
    }

    /// Exact k-th power.
    pub fn pow(&self, k: u32) -> Dyadic {
        Dyadic::new(self.num.pow(k), self.exp2 * k as i64)
    }
}

/// Exact dyadic of a finite f64 (safe for normals, zero and subnormals).
pub fn dyadic_of_f64(x: f64) -> Dyadic {
    debug_assert!(x.is_finite());
    let bits = x.to_bits();
    let frac = bits & ((1u64 << 52) - 1);
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let (m, e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), biased - 1075)
    };
    let mag = BigInt::from(m);
    Dyadic::new(if x.is_sign_negative() { -mag } else { mag }, e)
}

/// Converts a finite astro-float value into an exact dyadic rational.
pub fn dyadic_of_bigfloat(v: &astro_float::BigFloat) -> Dyadic {
    if v.is_zero() {
        return Dyadic::new(BigInt::from(0), 0);
    }
    let (words, _p, sign, e, _inexact) = v.as_raw_parts().expect("finite value");
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let mag = BigUint::from_bytes_le(&bytes);
    let num = if sign == astro_float::Sign::Neg {
        -BigInt::from(mag)
    } else {
        BigInt::from(mag)
    };
    Dyadic::new(num, e as i64 - (words.len() as i64) * 64)
}

/// Three-center tame/wild oracle in double precision: tests the distance to
/// the centers indexed a*−1, a*, a* + 1 where a* is the f64-rounded nearest
/// index. Returns (is_tame, min_distance, threshold).
pub fn classify_three_center_f64(n: u64) -> (bool, f64, f64) {
    let nf = n as f64;
    let a_star = ((nf - core::f64::consts::FRAC_PI_2) / core::f64::consts::TAU).round();
    let mut dmin = f64::INFINITY;
    for da in [-1.0f64, 0.0, 1.0] {
        let a = a_star + da;
        let d = (nf - core::f64::consts::FRAC_PI_2 - core::f64::consts::TAU * a).abs();
        if d < dmin {
            dmin = d;
        }
    }
    let threshold = 4.0 / nf.sqrt().sqrt();
    (dmin >= threshold, dmin, threshold)
}

/// Wild numbers up to `limit` per the three-center oracle.
pub fn wilds_f64(limit: u64) -> Vec<u64> {
    (1..=limit)
        .filter(|&n| !classify_three_center_f64(n).0)
        .collect()
}

/// Series term (2/3 + ⅓ sin n)ⁿ / n in double precision. Valid as an
/// approximate witness for n small enough that n·ε accumulation stays well
/// below the comparison tolerance.
pub fn term_f64(n: u64) -> f64 {
    let base = (2.0 + (n as f64).sin()) / 3.0;
    base.powi(n as i32) / n as f64
}

/// Kahan-compensated partial sum of the first `n_terms` series terms.
pub fn partial_sum_f64(n_terms: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for n in 1..=n_terms {
        let y = term_f64(n) - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Brute-force Σ_{n=N+1}^{cap} e^{−√n}, summed smallest-first so the f64
/// accumulation error stays near one ulp of the result.
pub fn tame_tail_brute_f64(after_n: u64, cap: u64) -> f64 {
    let mut sum = 0.0f64;
    for n in (after_n + 1..=cap).rev() {
        sum += (-(n as f64).sqrt()).exp();
    }
    sum
}

/// Brute-force Σ 1/w over the given wild numbers w with after_n < w ≤ cap.
pub fn wild_tail_brute_f64(wilds: &[u64], after_n: u64, cap: u64) -> f64 {
    let mut sum = 0.0f64;
    for &w in wilds.iter().rev() {
        if w > after_n && w <= cap {
            sum += 1.0 / w as f64;
        }
    }
    sum
}

/// Continued-fraction convergents of π used by the irrationality-gap checks.
/// The first entry (3, 1) has |q| = 1 and must be rejected by the checker.
pub const PI_CONVERGENTS: &[(i64, i64)] = &[
    (3, 1),
    (22, 7),
    (333, 106),
    (355, 113),
    (103993, 33102),
    (104348, 33215),
];

/// Frozen wild tables for small limits, derived from the three-center
/// oracle; the margins of every entry exceed 10⁻² so double precision is
/// decisive.
pub const WILDS_UPTO_11: &[u64] = &[1, 2, 3, 4, 6, 7, 8, 9, 10];
pub const WILDS_UPTO_17: &[u64] = &[1, 2, 3, 4, 6, 7, 8, 9, 10, 12, 13, 14, 15, 16];

/// Frozen double-precision reduction results (a, θ) for sample indices.
pub const REDUCE_SAMPLES: &[(u64, i64, f64)] = &[
    (1, 0, -0.5707963267948966),
    (5, 1, -2.853981633974483),
    (8, 1, 0.1460183660255172),
    (11, 2, -3.137166941154069),
    (12, 2, -2.137166941154069),
];

/// Frozen double-precision sine values for sample indices.
pub const SIN_SAMPLES: &[(u64, f64)] = &[
    (1, 0.8414709848078965),
    (2, 0.9092974268256817),
    (8, 0.9893582466233818),
    (11, -0.9999902065507035),
];

/// Frozen double-precision term values for sample indices.
pub const TERM_SAMPLES: &[(u64, f64)] = &[
    (1, 0.9471569949359656),
    (2, 0.47022286209636305),
    (8, 0.12149647827766315),
];
