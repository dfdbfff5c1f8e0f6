//! Outward-rounded interval arithmetic on multi-precision endpoints.
//!
//! Every operation returns an interval that contains the exact mathematical
//! image of its operands. Lower endpoints round toward −∞ and upper
//! endpoints toward +∞ at each elementary step. For substrate operations
//! whose intermediate results are exact before the final rounding
//! (addition, subtraction, multiplication via full-precision products),
//! directed rounding alone is sufficient; division, roots and
//! transcendentals additionally get a one-ulp outward widening per side, so
//! a merely faithful substrate rounding can never produce an invalid
//! enclosure.

use astro_float::{BigFloat, RoundingMode, Sign};
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::precision::PrecisionBits;
use crate::Ctx;

/// A closed range [lo, hi] of extended-precision reals with lo ≤ hi.
///
/// The endpoints are immutable after construction; all operations produce
/// new values, which makes intervals safe to share across workers.
#[derive(Debug, Clone)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
}

/// Total order on finite values; NaN endpoints are excluded by the
/// `Interval` constructors, so comparison failure indicates an internal bug.
pub(crate) fn cmp_bf(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(s) if s < 0 => Ordering::Less,
        Some(s) if s > 0 => Ordering::Greater,
        Some(_) => Ordering::Equal,
        None => panic!("comparison on non-finite value"),
    }
}

fn is_finite(x: &BigFloat) -> bool {
    !x.is_nan() && !x.is_inf()
}

/// `v` as an exact BigFloat (u64 always fits in a 64-bit mantissa).
pub(crate) fn bf_u64(v: u64) -> BigFloat {
    BigFloat::from_u64(v, 64)
}

/// `v` as an exact BigFloat.
pub(crate) fn bf_i64(v: i64) -> BigFloat {
    BigFloat::from_i64(v, 64)
}

/// `x` re-rounded to precision `p` in direction `rm`.
pub(crate) fn round_to(x: &BigFloat, p: usize, rm: RoundingMode) -> BigFloat {
    let mut r = x.clone();
    r.set_precision(p, rm).expect("set_precision on finite value");
    r
}

/// One unit in the last place of `x` at precision `p`: 2^(exponent(x) − p).
/// For a zero value the scale 2^−p is used.
pub(crate) fn ulp_at(x: &BigFloat, p: usize) -> BigFloat {
    let e = if x.is_zero() {
        0
    } else {
        x.exponent().expect("finite value") as i64
    };
    let mut u = BigFloat::from_word(1, 64);
    // from_word(1) is 0.1₂·2^1 = 2^0, so shifting its exponent by k gives 2^k.
    u.set_exponent((e - p as i64 + 1) as astro_float::Exponent);
    u
}

/// `x` pushed one ulp toward −∞ (used to absorb faithful rounding).
pub(crate) fn widen_down(x: &BigFloat, p: usize) -> BigFloat {
    let u = ulp_at(x, p);
    x.sub(&u, p, RoundingMode::Down)
}

/// `x` pushed one ulp toward +∞.
pub(crate) fn widen_up(x: &BigFloat, p: usize) -> BigFloat {
    let u = ulp_at(x, p);
    x.add(&u, p, RoundingMode::Up)
}

impl Interval {
    /// Builds an interval from endpoints, validating finiteness and order.
    pub fn from_endpoints(lo: BigFloat, hi: BigFloat) -> Result<Self> {
        if !is_finite(&lo) || !is_finite(&hi) {
            return Err(Error::EmptyInterval);
        }
        if cmp_bf(&lo, &hi) == Ordering::Greater {
            return Err(Error::EmptyInterval);
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval [v, v].
    pub fn point(v: BigFloat) -> Result<Self> {
        Self::from_endpoints(v.clone(), v)
    }

    /// Exact integer as a degenerate interval.
    pub fn from_u64(v: u64) -> Self {
        let b = bf_u64(v);
        Interval {
            lo: b.clone(),
            hi: b,
        }
    }

    /// Exact signed integer as a degenerate interval.
    pub fn from_i64(v: i64) -> Self {
        let b = bf_i64(v);
        Interval {
            lo: b.clone(),
            hi: b,
        }
    }

    /// Lower endpoint.
    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    /// Consumes the interval into its endpoints.
    pub fn into_endpoints(self) -> (BigFloat, BigFloat) {
        (self.lo, self.hi)
    }

    /// True when the exact value `v` lies inside.
    pub fn contains_bf(&self, v: &BigFloat) -> bool {
        cmp_bf(&self.lo, v) != Ordering::Greater && cmp_bf(v, &self.hi) != Ordering::Greater
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Interval) -> bool {
        cmp_bf(&self.lo, &other.lo) != Ordering::Greater
            && cmp_bf(&other.hi, &self.hi) != Ordering::Greater
    }

    /// True when `self` lies entirely inside `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.contains(self)
    }

    /// hi − lo rounded upward at precision `p`.
    pub fn width_up(&self, p: PrecisionBits) -> BigFloat {
        self.hi.sub(&self.lo, p.p(), RoundingMode::Up)
    }

    /// Midpoint rounded to nearest at precision `p`. The midpoint of a valid
    /// interval always lies inside it up to one rounding step.
    pub fn midpoint(&self, p: PrecisionBits) -> BigFloat {
        let s = self.lo.add(&self.hi, p.p() + 8, RoundingMode::ToEven);
        let mut m = s;
        if !m.is_zero() {
            let e = m.exponent().expect("finite sum");
            m.set_exponent(e - 1);
        }
        round_to(&m, p.p(), RoundingMode::ToEven)
    }

    /// Exact negation [−hi, −lo].
    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    /// Exact absolute value of the interval as a set.
    pub fn abs(&self) -> Interval {
        let zero = BigFloat::from_word(0, 64);
        if cmp_bf(&self.lo, &zero) != Ordering::Less {
            self.clone()
        } else if cmp_bf(&self.hi, &zero) != Ordering::Greater {
            self.neg()
        } else {
            // Straddles zero: [0, max(|lo|, hi)].
            let neg_lo = self.lo.neg();
            let hi = if cmp_bf(&neg_lo, &self.hi) == Ordering::Greater {
                neg_lo
            } else {
                self.hi.clone()
            };
            Interval { lo: zero, hi }
        }
    }

    /// Exact scaling by 2^k via exponent arithmetic on both endpoints.
    pub fn scale2(&self, k: i32) -> Interval {
        let shift = |x: &BigFloat| {
            if x.is_zero() {
                x.clone()
            } else {
                let mut y = x.clone();
                let e = y.exponent().expect("finite value");
                y.set_exponent(e + k);
                y
            }
        };
        Interval {
            lo: shift(&self.lo),
            hi: shift(&self.hi),
        }
    }

    /// Sum with outward rounding at precision `p`.
    pub fn add(&self, rhs: &Interval, p: PrecisionBits) -> Interval {
        Interval {
            lo: self.lo.add(&rhs.lo, p.p(), RoundingMode::Down),
            hi: self.hi.add(&rhs.hi, p.p(), RoundingMode::Up),
        }
    }

    /// Difference with outward rounding at precision `p`.
    pub fn sub(&self, rhs: &Interval, p: PrecisionBits) -> Interval {
        Interval {
            lo: self.lo.sub(&rhs.hi, p.p(), RoundingMode::Down),
            hi: self.hi.sub(&rhs.lo, p.p(), RoundingMode::Up),
        }
    }

    /// Product with outward rounding at precision `p`.
    ///
    /// The four endpoint products are computed at full precision (exactly),
    /// the extremes are selected, and only the final re-rounding to `p` is
    /// directed. This sidesteps any question of directed-rounding fidelity
    /// inside the substrate's multiplier.
    pub fn mul(&self, rhs: &Interval, p: PrecisionBits) -> Interval {
        let products = [
            self.lo.mul_full_prec(&rhs.lo),
            self.lo.mul_full_prec(&rhs.hi),
            self.hi.mul_full_prec(&rhs.lo),
            self.hi.mul_full_prec(&rhs.hi),
        ];
        let mut min = &products[0];
        let mut max = &products[0];
        for q in &products[1..] {
            if cmp_bf(q, min) == Ordering::Less {
                min = q;
            }
            if cmp_bf(q, max) == Ordering::Greater {
                max = q;
            }
        }
        Interval {
            lo: round_to(min, p.p(), RoundingMode::Down),
            hi: round_to(max, p.p(), RoundingMode::Up),
        }
    }

    /// Quotient with outward rounding at precision `p`.
    ///
    /// The divisor must not contain zero. All four endpoint quotients are
    /// evaluated in both rounding directions and widened by one ulp, and the
    /// extremes are taken; this is correct for any sign-definite divisor.
    pub fn div(&self, rhs: &Interval, p: PrecisionBits) -> Result<Interval> {
        let zero = BigFloat::from_word(0, 64);
        let divisor_positive = cmp_bf(&rhs.lo, &zero) == Ordering::Greater;
        let divisor_negative = cmp_bf(&rhs.hi, &zero) == Ordering::Less;
        if !divisor_positive && !divisor_negative {
            return Err(Error::DivisionByZero);
        }
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for num in [&self.lo, &self.hi] {
            for den in [&rhs.lo, &rhs.hi] {
                let d = widen_down(&num.div(den, p.p(), RoundingMode::Down), p.p());
                let u = widen_up(&num.div(den, p.p(), RoundingMode::Up), p.p());
                lo = Some(match lo {
                    Some(cur) if cmp_bf(&cur, &d) != Ordering::Greater => cur,
                    _ => d,
                });
                hi = Some(match hi {
                    Some(cur) if cmp_bf(&cur, &u) != Ordering::Less => cur,
                    _ => u,
                });
            }
        }
        Ok(Interval {
            lo: lo.expect("nonempty candidates"),
            hi: hi.expect("nonempty candidates"),
        })
    }

    /// Square root with outward rounding; requires lo ≥ 0.
    pub fn sqrt(&self, p: PrecisionBits) -> Result<Interval> {
        let zero = BigFloat::from_word(0, 64);
        if cmp_bf(&self.lo, &zero) == Ordering::Less {
            return Err(Error::Domain("sqrt"));
        }
        let lo = widen_down(&self.lo.sqrt(p.p(), RoundingMode::Down), p.p());
        let hi = widen_up(&self.hi.sqrt(p.p(), RoundingMode::Up), p.p());
        let lo = if cmp_bf(&lo, &zero) == Ordering::Less {
            zero
        } else {
            lo
        };
        Ok(Interval { lo, hi })
    }

    /// Fourth root via two square roots; requires lo ≥ 0.
    pub fn fourth_root(&self, p: PrecisionBits) -> Result<Interval> {
        self.sqrt(p)?.sqrt(p)
    }

    /// Exponential with outward rounding (monotone increasing, so endpoint
    /// evaluation suffices). The lower endpoint stays strictly positive
    /// because widening by one ulp cannot cross zero from a positive value.
    pub fn exp(&self, p: PrecisionBits, ctx: &mut Ctx) -> Interval {
        let lo = widen_down(&self.lo.exp(p.p(), RoundingMode::Down, &mut ctx.cc), p.p());
        let hi = widen_up(&self.hi.exp(p.p(), RoundingMode::Up, &mut ctx.cc), p.p());
        Interval { lo, hi }
    }

    /// Natural logarithm with outward rounding; requires lo > 0.
    pub fn ln(&self, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
        let zero = BigFloat::from_word(0, 64);
        if cmp_bf(&self.lo, &zero) != Ordering::Greater {
            return Err(Error::Domain("ln"));
        }
        let lo = widen_down(&self.lo.ln(p.p(), RoundingMode::Down, &mut ctx.cc), p.p());
        let hi = widen_up(&self.hi.ln(p.p(), RoundingMode::Up, &mut ctx.cc), p.p());
        Ok(Interval { lo, hi })
    }

    /// Integer power xⁿ with outward rounding, for any sign pattern of x.
    ///
    /// Uses the substrate's correctly rounded integer power on each endpoint
    /// with a one-ulp widening. For inputs within [0, 1] the result stays
    /// within [0, 1]: powers cannot exceed 1 there and the upper endpoint is
    /// clamped against the widening.
    pub fn pow_uint(&self, n: u64, p: PrecisionBits) -> Interval {
        if n == 0 {
            return Interval::from_u64(1);
        }
        if n == 1 {
            return self.clone();
        }
        let zero = BigFloat::from_word(0, 64);
        let one = BigFloat::from_word(1, 64);
        let pw = |x: &BigFloat, rm: RoundingMode| -> BigFloat {
            let r = x.powi(n as usize, p.p(), rm);
            match rm {
                RoundingMode::Down => widen_down(&r, p.p()),
                _ => widen_up(&r, p.p()),
            }
        };
        let nonneg = cmp_bf(&self.lo, &zero) != Ordering::Less;
        let nonpos = cmp_bf(&self.hi, &zero) != Ordering::Greater;
        let (mut lo, mut hi) = if nonneg {
            // Monotone increasing on [0, ∞).
            (
                pw(&self.lo, RoundingMode::Down),
                pw(&self.hi, RoundingMode::Up),
            )
        } else if nonpos {
            if n.is_multiple_of(2) {
                // Decreasing on (−∞, 0] for even powers.
                (
                    pw(&self.hi, RoundingMode::Down),
                    pw(&self.lo, RoundingMode::Up),
                )
            } else {
                (
                    pw(&self.lo, RoundingMode::Down),
                    pw(&self.hi, RoundingMode::Up),
                )
            }
        } else if n.is_multiple_of(2) {
            // Straddles zero, even power: minimum is 0.
            let m = self.abs();
            (zero.clone(), pw(&m.hi, RoundingMode::Up))
        } else {
            (
                pw(&self.lo, RoundingMode::Down),
                pw(&self.hi, RoundingMode::Up),
            )
        };
        // Keep powers of [0, 1]-subsets inside [0, 1] despite widening.
        if nonneg {
            if cmp_bf(&lo, &zero) == Ordering::Less {
                lo = zero;
            }
            if cmp_bf(&self.hi, &one) != Ordering::Greater
                && cmp_bf(&hi, &one) == Ordering::Greater
            {
                hi = one;
            }
        }
        Interval { lo, hi }
    }

    /// Intersection; errors when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let lo = if cmp_bf(&self.lo, &other.lo) == Ordering::Greater {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if cmp_bf(&self.hi, &other.hi) == Ordering::Less {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Interval::from_endpoints(lo, hi)
    }

    /// Both endpoints re-rounded outward to exactly precision `p`.
    pub fn round_out(&self, p: PrecisionBits) -> Interval {
        Interval {
            lo: round_to(&self.lo, p.p(), RoundingMode::Down),
            hi: round_to(&self.hi, p.p(), RoundingMode::Up),
        }
    }

    /// Bit-level equality of endpoints (mantissa words, sign, exponent,
    /// stored precision). Used by determinism tests; distinct from value
    /// equality.
    pub fn raw_eq(&self, other: &Interval) -> bool {
        fn raw(x: &BigFloat) -> Option<(alloc::vec::Vec<astro_float::Word>, Sign, i32)> {
            x.as_raw_parts()
                .map(|(w, _p, s, e, _)| (w.to_vec(), s, e))
        }
        raw(&self.lo) == raw(&other.lo) && raw(&self.hi) == raw(&other.hi)
    }
}
