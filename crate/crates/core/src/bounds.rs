//! Verified inequalities and certified tail bounds.
//!
//! Three families of checks live here:
//!
//! 1. the decay inequality for tame indices — (2/3 + ⅓ sin n)ⁿ ≤ e^{−√n} —
//!    swept over ranges with adaptive precision ([`verify_lemma_tame`]);
//! 2. the growth inequality for wild numbers — W_k ≥ ½k^{77/76} — checked
//!    against an enumerated wild table ([`verify_wild_growth`]), and the
//!    irrationality-gap inequality |π − p/q| > 1/|q|^e for rational
//!    approximations ([`mahler_check`]);
//! 3. effective tail majorants for the series split into its tame and wild
//!    parts, combined into a certified upper bound on the full sum and a
//!    one-interval enclosure ([`tame_tail_bound`], [`wild_tail_bound`],
//!    [`total_upper_bound`], [`certified_enclosure`]).
//!
//! The tame tail uses the integral majorant Σ_{n>N} e^{−√n} ≤ 2(√N+1)e^{−√N}
//! (the integrand is decreasing with antiderivative −2(√t+1)e^{−√t}). The
//! wild tail uses 1/W_k ≤ min(1/N, 2k^{−77/76}) split at k* = (2N)^{76/77},
//! giving k*/N + 2k*^{−77/76} + 152·k*^{−1/76}; the last term comes from
//! ∫ 2t^{−77/76} dt = 152·t^{−1/76}. Both are upward-rounded interval
//! evaluations, so every reported bound is a true upper bound.

use alloc::vec::Vec;
use astro_float::{BigFloat, RoundingMode};
use core::cmp::Ordering;

use crate::classify::{classify_with, Verdict, WildTable, DEFAULT_PRECISION_CEILING};
use crate::error::{Error, Result};
use crate::f64conv::f64_down;
use crate::interval::{bf_u64, cmp_bf, Interval};
use crate::pi::pi_enclosure;
use crate::precision::PrecisionBits;
use crate::series::{partial_sum, power_certified, Engine, PartialSum};
use crate::Ctx;

/// A rational approximation p/q subjected to the gap check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalApprox {
    /// Numerator.
    pub p: i64,
    /// Denominator; the gap theorem requires |q| > 1.
    pub q: i64,
}

/// Upper bounds on the series tail after a cut index.
#[derive(Debug, Clone)]
pub struct TailBound {
    /// Terms 1…after_n are excluded; the bounds cover everything beyond.
    pub after_n: u64,
    /// Upper bound on the tame part Σ_{n>N, tame} term(n).
    pub tame_tail: BigFloat,
    /// Upper bound on the wild part Σ_{n>N, wild} term(n).
    pub wild_tail: BigFloat,
    /// tame_tail + wild_tail, rounded upward.
    pub total_tail: BigFloat,
}

impl TailBound {
    /// Computes both tail majorants after index `after_n` ≥ 1.
    pub fn new(after_n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<TailBound> {
        if after_n == 0 {
            return Err(Error::InvalidIndex(0));
        }
        let tame = tame_tail_bound(after_n, p, ctx)?;
        let wild = wild_tail_bound(after_n, p, ctx)?;
        let tame_hi = tame.hi().clone();
        let wild_hi = wild.hi().clone();
        let total = tame_hi.add(&wild_hi, p.p(), RoundingMode::Up);
        Ok(TailBound {
            after_n,
            tame_tail: tame_hi,
            wild_tail: wild_hi,
            total_tail: total,
        })
    }
}

/// One certified counterexample found by a verification sweep.
#[derive(Debug, Clone, Copy)]
pub struct CheckFailure {
    /// Index (n or k) at which the inequality failed.
    pub at: u64,
    /// The side that must stay below, as a double for reporting.
    pub lhs: f64,
    /// The side that must stay above.
    pub rhs: f64,
}

/// Outcome of a verification sweep.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Which check ran: "tame-decay", "wild-growth" or "pi-rational-gap".
    pub check: &'static str,
    /// Inclusive index range swept.
    pub range: (u64, u64),
    /// True when no certified failure was found.
    pub passed: bool,
    /// Certified failures (empty on pass).
    pub failures: Vec<CheckFailure>,
    /// Smallest absolute slack between the two sides, if anything was checked.
    pub min_slack: Option<f64>,
    /// Index attaining `min_slack`.
    pub min_slack_at: Option<u64>,
    /// Starting precision of the sweep.
    pub precision_bits: u32,
    /// Number of indices actually checked.
    pub checked: u64,
    /// Number of indices skipped (wild indices in the tame sweep).
    pub skipped: u64,
}

/// Result of one irrationality-gap check.
#[derive(Debug, Clone)]
pub struct MahlerOutcome {
    /// The approximation tested.
    pub approx: RationalApprox,
    /// Exponent e in the threshold 1/|q|^e.
    pub exponent: f64,
    /// Enclosure of |π − p/q|.
    pub gap: Interval,
    /// Enclosure of 1/|q|^e.
    pub threshold: Interval,
    /// True when gap.lo > threshold.hi is certified. False means the check
    /// is inconclusive at this precision, never that the gap is too small.
    pub passed: bool,
    /// Precision of the evaluation.
    pub precision_bits: u32,
}

/// Encloses e^{−√n}, the decay bound for tame indices.
pub fn tame_bound(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let root = Interval::from_u64(n).sqrt(p)?;
    Ok(root.neg().exp(p, ctx))
}

/// Encloses x^(num/den) for an interval x with x.lo > 0, via exp((num/den)·ln x).
fn pow_ratio(
    x: &Interval,
    num: i64,
    den: u64,
    p: PrecisionBits,
    ctx: &mut Ctx,
) -> Result<Interval> {
    let ratio = Interval::from_i64(num).div(&Interval::from_u64(den), p)?;
    let ln_x = x.ln(p, ctx)?;
    Ok(ln_x.mul(&ratio, p).exp(p, ctx))
}

/// Sweeps [n_lo, n_hi], certifying (2/3 + ⅓ sin n)ⁿ ≤ e^{−√n} for every
/// tame n; wild indices are skipped and counted. Near-misses trigger
/// precision doubling before anything is declared a failure.
pub fn verify_lemma_tame(
    n_lo: u64,
    n_hi: u64,
    p: PrecisionBits,
    ctx: &mut Ctx,
) -> Result<VerifyReport> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::InvalidIndex(n_lo));
    }
    let mut failures = Vec::new();
    let mut min_slack: Option<f64> = None;
    let mut min_slack_at: Option<u64> = None;
    let mut checked = 0u64;
    let mut skipped = 0u64;
    for n in n_lo..=n_hi {
        let cls = classify_with(n, p, DEFAULT_PRECISION_CEILING, ctx)?;
        if cls.verdict == Verdict::Wild {
            skipped += 1;
            continue;
        }
        let mut q = p;
        loop {
            let power = power_certified(n, q, ctx)?;
            let bound = tame_bound(n, q, ctx)?;
            if cmp_bf(power.hi(), bound.lo()) != Ordering::Greater {
                let slack = f64_down(&bound.lo().sub(power.hi(), q.p(), RoundingMode::Down));
                if min_slack.is_none_or(|m| slack < m) {
                    min_slack = Some(slack);
                    min_slack_at = Some(n);
                }
                checked += 1;
                break;
            }
            if cmp_bf(power.lo(), bound.hi()) == Ordering::Greater {
                // Certified violation: the power provably exceeds the bound.
                failures.push(CheckFailure {
                    at: n,
                    lhs: f64_down(power.lo()),
                    rhs: f64_down(bound.hi()),
                });
                checked += 1;
                break;
            }
            let next = q.doubled();
            if next.bits() > DEFAULT_PRECISION_CEILING || next.bits() == q.bits() {
                return Err(Error::UndecidableAtPrecision {
                    n,
                    ceiling: DEFAULT_PRECISION_CEILING,
                });
            }
            q = next;
        }
    }
    Ok(VerifyReport {
        check: "tame-decay",
        range: (n_lo, n_hi),
        passed: failures.is_empty(),
        failures,
        min_slack,
        min_slack_at,
        precision_bits: p.bits(),
        checked,
        skipped,
    })
}

/// Certifies W_k ≥ ½k^{77/76} for every entry of the table, reporting the
/// minimal slack and where it occurs.
pub fn verify_wild_growth(
    table: &WildTable,
    p: PrecisionBits,
    ctx: &mut Ctx,
) -> Result<VerifyReport> {
    let mut failures = Vec::new();
    let mut min_slack: Option<f64> = None;
    let mut min_slack_at: Option<u64> = None;
    let mut checked = 0u64;
    for (k, w) in table.entries() {
        let bound = pow_ratio(&Interval::from_u64(k), 77, 76, p, ctx)?.scale2(-1);
        let w_bf = bf_u64(w);
        if cmp_bf(&w_bf, bound.hi()) != Ordering::Less {
            let slack = f64_down(&w_bf.sub(bound.hi(), p.p(), RoundingMode::Down));
            if min_slack.is_none_or(|m| slack < m) {
                min_slack = Some(slack);
                min_slack_at = Some(k);
            }
        } else {
            failures.push(CheckFailure {
                at: k,
                lhs: f64_down(&w_bf),
                rhs: f64_down(bound.hi()),
            });
        }
        checked += 1;
    }
    Ok(VerifyReport {
        check: "wild-growth",
        range: (1, table.count()),
        passed: failures.is_empty(),
        failures,
        min_slack,
        min_slack_at,
        precision_bits: p.bits(),
        checked,
        skipped: 0,
    })
}

/// Certifies |π − p/q| > 1/|q|^exponent for a rational approximation with
/// |q| > 1.
pub fn mahler_check(
    r: RationalApprox,
    exponent: f64,
    p: PrecisionBits,
    ctx: &mut Ctx,
) -> Result<MahlerOutcome> {
    if r.q.unsigned_abs() <= 1 {
        return Err(Error::HypothesisViolation { p: r.p, q: r.q });
    }
    // is_normal also excludes subnormal exponents, which the substrate's
    // f64 parser cannot represent faithfully.
    if !(exponent.is_normal() && exponent > 0.0) {
        return Err(Error::Domain("gap exponent must be positive and normal"));
    }
    let pi = pi_enclosure(p, ctx);
    let ratio = Interval::from_i64(r.p).div(&Interval::from_i64(r.q), p)?;
    let gap = pi.sub(&ratio, p).abs();
    let abs_q = Interval::from_u64(r.q.unsigned_abs());
    let exp_iv = Interval::point(BigFloat::from_f64(exponent, p.p()))
        .expect("finite exponent");
    let ln_q = abs_q.ln(p, ctx)?;
    let threshold = ln_q.mul(&exp_iv, p).neg().exp(p, ctx);
    let passed = cmp_bf(gap.lo(), threshold.hi()) == Ordering::Greater;
    Ok(MahlerOutcome {
        approx: r,
        exponent,
        gap,
        threshold,
        passed,
        precision_bits: p.bits(),
    })
}

/// Upper-bounding enclosure of the tame tail: 2(√N + 1)e^{−√N} majorizes
/// Σ_{n>N} e^{−√n}, which in turn majorizes the tame part of the series
/// tail. N = 0 bounds the whole tame sum (value 2).
pub fn tame_tail_bound(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    let root = Interval::from_u64(n).sqrt(p)?;
    let one = Interval::from_u64(1);
    let factor = root.add(&one, p).scale2(1);
    let decay = root.neg().exp(p, ctx);
    Ok(factor.mul(&decay, p))
}

/// Upper-bounding enclosure of the wild tail Σ_{wild n > N} term(n), via
/// the k* split described in the module docs. Decreasing in N.
pub fn wild_tail_bound(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let two_n = Interval::from_u64(n).scale2(1);
    let k_star = pow_ratio(&two_n, 76, 77, p, ctx)?;
    let first = k_star.div(&Interval::from_u64(n), p)?;
    let second = pow_ratio(&k_star, -77, 76, p, ctx)?.scale2(1);
    let third = pow_ratio(&k_star, -1, 76, p, ctx)?.mul(&Interval::from_u64(152), p);
    Ok(first.add(&second, p).add(&third, p))
}

/// Combines an already-computed certified partial sum with a tail bound
/// into one enclosure of the full series value:
/// [partial.lo, partial.hi + total tail]. The two arguments must cover
/// complementary ranges (the tail starts where the partial sum stops), and
/// the partial sum must come from the certified engine — a fast point value
/// carries no rigorous endpoints to extend.
pub fn enclosure_with_tail(
    ps: &PartialSum,
    tail: &TailBound,
    p: PrecisionBits,
) -> Result<Interval> {
    if ps.engine != Engine::Certified {
        return Err(Error::Domain(
            "only certified partial sums extend to a full-series enclosure",
        ));
    }
    if ps.upto_n != tail.after_n {
        return Err(Error::Domain(
            "partial sum and tail bound cover different ranges",
        ));
    }
    let hi = ps.value.hi().add(&tail.total_tail, p.p(), RoundingMode::Up);
    Interval::from_endpoints(ps.value.lo().clone(), hi)
}

/// Certified upper bound on the full series: the certified partial sum to
/// `n0` plus both tail majorants, rounded upward.
pub fn total_upper_bound(n0: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<BigFloat> {
    Ok(certified_enclosure(n0, p, ctx)?.hi().clone())
}

/// One-interval enclosure of the true sum of the whole series:
/// [partial.lo, partial.hi + total tail]. Its width is dominated by the
/// wild tail's (2N₀)^{−1/77} decay — the honest Diophantine bottleneck.
pub fn certified_enclosure(n0: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    let ps = partial_sum(n0, Engine::Certified, p, ctx)?;
    let tail = TailBound::new(n0, p, ctx)?;
    enclosure_with_tail(&ps, &tail, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::wild_up_to;
    use crate::f64conv::f64_up;

    fn p96() -> PrecisionBits {
        PrecisionBits::new(96).unwrap()
    }

    #[test]
    fn tame_bound_matches_closed_forms() {
        let mut ctx = Ctx::new();
        let cases = [
            (1u64, 0.36787944117144233),
            (4, 0.1353352832366127),
            (100, 4.5399929762484854e-5),
        ];
        for (n, expect) in cases {
            let iv = tame_bound(n, p96(), &mut ctx).unwrap();
            assert!((f64_down(iv.lo()) - expect).abs() < 1e-13, "n={n}");
            assert!((f64_up(iv.hi()) - expect).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn tame_decay_sweep_passes_and_counts_wild_skips() {
        let mut ctx = Ctx::new();
        let report = verify_lemma_tame(1, 20, p96(), &mut ctx).unwrap();
        assert!(report.passed);
        assert!(report.failures.is_empty());
        // Tame indices up to 20 are exactly {5, 11, 17, 18}.
        assert_eq!(report.checked, 4);
        assert_eq!(report.skipped, 16);
        assert!(report.min_slack.unwrap() > 0.0);
    }

    #[test]
    fn tame_decay_sweep_is_vacuous_on_all_wild_ranges() {
        let mut ctx = Ctx::new();
        let report = verify_lemma_tame(1, 4, p96(), &mut ctx).unwrap();
        assert!(report.passed);
        assert_eq!(report.checked, 0);
        assert_eq!(report.skipped, 4);
        assert!(report.min_slack.is_none());
        assert!(report.min_slack_at.is_none());
    }

    #[test]
    fn wild_growth_holds_with_tightest_slack_at_one() {
        let mut ctx = Ctx::new();
        let table = wild_up_to(100, p96(), &mut ctx).unwrap();
        let report = verify_wild_growth(&table, p96(), &mut ctx).unwrap();
        assert!(report.passed);
        assert_eq!(report.checked, table.count());
        assert_eq!(report.min_slack_at, Some(1));
        let slack = report.min_slack.unwrap();
        assert!((slack - 0.5).abs() < 1e-12, "slack={slack}");
        // Wild numbers are distinct positive integers, so W_k ≥ k.
        for (k, w) in table.entries() {
            assert!(w >= k);
        }
    }

    #[test]
    fn gap_check_passes_known_approximations_and_rejects_unit_denominator() {
        let mut ctx = Ctx::new();
        let ok = mahler_check(RationalApprox { p: 22, q: 7 }, 20.0, p96(), &mut ctx).unwrap();
        assert!(ok.passed);
        assert!((f64_down(ok.gap.lo()) - 1.2644892673496185e-3).abs() < 1e-12);
        let ok = mahler_check(RationalApprox { p: 355, q: 113 }, 20.0, p96(), &mut ctx).unwrap();
        assert!(ok.passed);
        assert!((f64_down(ok.gap.lo()) - 2.667641894049666e-7).abs() < 1e-15);
        let err = mahler_check(RationalApprox { p: 3, q: 1 }, 20.0, p96(), &mut ctx).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { p: 3, q: 1 }));
    }

    #[test]
    fn gap_check_reports_inconclusive_with_small_exponent() {
        // With exponent 1 the threshold 1/7 exceeds the true gap, so the
        // certification must not pass.
        let mut ctx = Ctx::new();
        let out = mahler_check(RationalApprox { p: 22, q: 7 }, 1.0, p96(), &mut ctx).unwrap();
        assert!(!out.passed);
    }

    #[test]
    fn tame_tail_matches_closed_forms() {
        let mut ctx = Ctx::new();
        let at0 = tame_tail_bound(0, p96(), &mut ctx).unwrap();
        assert!(at0.contains_bf(&BigFloat::from_f64(2.0, 96)));
        let at100 = tame_tail_bound(100, p96(), &mut ctx).unwrap();
        assert!((f64_up(at100.hi()) - 9.987984547746667e-4).abs() < 1e-12);
        let at1e4 = tame_tail_bound(10_000, p96(), &mut ctx).unwrap();
        assert!(f64_up(at1e4.hi()) < 1e-41);
    }

    #[test]
    fn wild_tail_is_bounded_and_decreasing() {
        let mut ctx = Ctx::new();
        let at1 = wild_tail_bound(1, p96(), &mut ctx).unwrap();
        assert!(f64_up(at1.hi()) <= 156.0, "at1={}", f64_up(at1.hi()));
        assert!(f64_down(at1.lo()) >= 140.0);
        let at1e3 = wild_tail_bound(1_000, p96(), &mut ctx).unwrap();
        let at1e6 = wild_tail_bound(1_000_000, p96(), &mut ctx).unwrap();
        assert!(f64_up(at1e6.hi()) < f64_down(at1e3.lo()));
        assert!(f64_up(at1e3.hi()) < f64_down(at1.lo()));
    }

    #[test]
    fn tail_bounds_combine_and_shrink() {
        let mut ctx = Ctx::new();
        let t1 = TailBound::new(1, p96(), &mut ctx).unwrap();
        let t10 = TailBound::new(10, p96(), &mut ctx).unwrap();
        assert!(f64_up(&t10.total_tail) < f64_up(&t1.total_tail));
        let sum = f64_down(&t1.tame_tail) + f64_down(&t1.wild_tail);
        assert!(f64_up(&t1.total_tail) >= sum);
        assert!(TailBound::new(0, p96(), &mut ctx).is_err());
    }

    #[test]
    fn total_upper_bound_reproduces_the_headline_constant() {
        let mut ctx = Ctx::new();
        for n0 in [1u64, 10] {
            let bound = total_upper_bound(n0, p96(), &mut ctx).unwrap();
            let b = f64_up(&bound);
            assert!(b < 200.0, "n0={n0} bound={b}");
            assert!(b > 2.163, "n0={n0} bound={b}");
        }
    }

    #[test]
    fn enclosures_nest_as_the_cut_grows() {
        let mut ctx = Ctx::new();
        let wide = certified_enclosure(10, p96(), &mut ctx).unwrap();
        let narrow = certified_enclosure(1_000, p96(), &mut ctx).unwrap();
        assert!(narrow.is_subset_of(&wide));
        // The enclosure must contain the well-known partial value region.
        assert!(wide.contains_bf(&BigFloat::from_f64(2.163, 96)));
    }
}
