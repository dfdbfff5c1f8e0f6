//! Tame/wild classification of indices and enumeration of wild numbers.
//!
//! An index n is *tame* when its distance to every grid point π/2 + 2πa
//! (integer a) is at least 4/n^¼, and *wild* otherwise. The reduction in
//! [`crate::reduce`] already measures the signed distance θ to the nearest
//! grid point, so classification is a comparison of two enclosures; when
//! they overlap the working precision doubles until the verdict is certain
//! or a configured ceiling is exceeded.
//!
//! Only the nearest grid point needs testing: competing points lie at least
//! 2π − |θ| ≥ 2π − π = π away once the nearest one is at distance |θ| ≤ π,
//! and the threshold never exceeds 4/1 = 4 < 2π − π + π... more precisely,
//! a non-nearest point is at distance ≥ 2π − π > 3.14 from n, which only
//! matters for n ∈ {1, 2} where the threshold exceeds π — and those indices
//! are already wild via their nearest point. The three-point variant is
//! kept in the test suite as an independent check.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use core::fmt;

use crate::error::{Error, Result};
use crate::interval::{cmp_bf, Interval};
use crate::precision::PrecisionBits;
use crate::reduce::reduce;
use crate::Ctx;

/// Precision ceiling (bits) for the adaptive classification loop. An index
/// that stays undecidable at this precision would contradict the known
/// irrationality measure of π for every index below 2⁶³.
pub const DEFAULT_PRECISION_CEILING: u32 = 16384;

/// Largest scan limit accepted by [`wild_up_to`]. The bound keeps the
/// double-precision tame triage inside its analyzed error budget (see
/// `TRIAGE_MARGIN`).
pub const WILD_SCAN_LIMIT_MAX: u64 = 1_000_000_000;

/// Slack added to the double-precision distance test before an index is
/// skipped as tame without interval arithmetic.
///
/// For n ≤ 10⁹ the grid point π/2 + 2πa of the containing cell satisfies
/// a < 1.6·10⁸, so computing it in double precision has absolute error
/// below ~5·10⁻⁷ (one multiplication and one addition on magnitudes ≤ 7·10⁹),
/// and 4·n^{−1/4} is accurate to ~10⁻¹⁵. A double-precision margin of 10⁻⁴
/// therefore exceeds the worst-case triage error by more than two orders of
/// magnitude: `d ≥ τ + TRIAGE_MARGIN` in doubles implies d > τ exactly.
/// Every index failing this test — wild or near-threshold — receives a full
/// interval classification.
const TRIAGE_MARGIN: f64 = 1e-4;

/// Certified verdict for one index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Distance to every grid point is at least the threshold.
    Tame,
    /// Some grid point lies strictly closer than the threshold.
    Wild,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Tame => f.write_str("tame"),
            Verdict::Wild => f.write_str("wild"),
        }
    }
}

/// Certified classification of a single index.
#[derive(Debug, Clone)]
pub struct Classification {
    /// The classified index.
    pub n: u64,
    /// Enclosure of the signed distance n − π/2 − 2πa to the nearest grid
    /// point, rounded out to `precision_used`.
    pub theta: Interval,
    /// Enclosure of the threshold 4/n^¼ at `precision_used`.
    pub threshold: Interval,
    /// The certified verdict.
    pub verdict: Verdict,
    /// Precision at which the verdict became certain.
    pub precision_used: PrecisionBits,
}

/// Ordered table of wild numbers up to a scan limit.
///
/// Entry k (1-based) is W_k, the k-th smallest wild number. Every integer
/// in [1, scan_limit] absent from the table is certified tame; every entry
/// is certified wild.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WildTable {
    scan_limit: u64,
    precision_used: PrecisionBits,
    wilds: Vec<u64>,
}

impl WildTable {
    /// Rebuilds a table from parts (e.g. a parsed cache file), validating
    /// the structural invariants: entries strictly increasing, positive,
    /// and within the scan limit.
    pub fn from_parts(
        scan_limit: u64,
        precision_used: PrecisionBits,
        wilds: Vec<u64>,
    ) -> Result<Self> {
        let mut prev = 0u64;
        for &w in &wilds {
            if w == 0 || w <= prev || w > scan_limit {
                return Err(Error::Numeric("wild table entries out of order or range"));
            }
            prev = w;
        }
        Ok(WildTable {
            scan_limit,
            precision_used,
            wilds,
        })
    }

    /// Upper end of the scanned range.
    pub fn scan_limit(&self) -> u64 {
        self.scan_limit
    }

    /// Starting precision of the classifications behind the table.
    pub fn precision_used(&self) -> PrecisionBits {
        self.precision_used
    }

    /// The wild numbers in increasing order.
    pub fn wilds(&self) -> &[u64] {
        &self.wilds
    }

    /// Number of wild numbers found.
    pub fn count(&self) -> u64 {
        self.wilds.len() as u64
    }

    /// Iterator over (k, W_k) pairs, k starting at 1.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.wilds
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as u64 + 1, w))
    }

    /// W_k for 1-based k, if the table extends that far.
    pub fn kth(&self, k: u64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        self.wilds.get(k as usize - 1).copied()
    }

    /// Extends the table in place to a larger scan limit by scanning only
    /// the new range. Extending to a smaller or equal limit is a no-op.
    pub fn extend_to(&mut self, new_limit: u64, ctx: &mut Ctx) -> Result<()> {
        if new_limit <= self.scan_limit {
            return Ok(());
        }
        if new_limit > WILD_SCAN_LIMIT_MAX {
            return Err(Error::Domain("wild scan limit exceeds supported maximum"));
        }
        scan_into(
            self.scan_limit + 1,
            new_limit,
            self.precision_used,
            DEFAULT_PRECISION_CEILING,
            ctx,
            &mut self.wilds,
        )?;
        self.scan_limit = new_limit;
        Ok(())
    }
}

/// Encloses the wildness threshold 4·n^(−1/4).
pub fn threshold(n: u64, p: PrecisionBits) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let root = Interval::from_u64(n).fourth_root(p)?;
    Interval::from_u64(4).div(&root, p)
}

/// Classifies `n` with the default starting precision (96 bits) and ceiling.
pub fn classify(n: u64, ctx: &mut Ctx) -> Result<Classification> {
    classify_with(n, PrecisionBits::DEFAULT, DEFAULT_PRECISION_CEILING, ctx)
}

/// Classifies `n`, starting at precision `start` and doubling on overlap
/// until the verdict is certain or `ceiling_bits` is exceeded.
pub fn classify_with(
    n: u64,
    start: PrecisionBits,
    ceiling_bits: u32,
    ctx: &mut Ctx,
) -> Result<Classification> {
    let mut p = start;
    loop {
        let r = reduce(n, p, ctx)?;
        let distance = r.theta.abs();
        let tau = threshold(n, p)?;
        let verdict = if cmp_bf(distance.lo(), tau.hi()) != core::cmp::Ordering::Less {
            Some(Verdict::Tame)
        } else if cmp_bf(distance.hi(), tau.lo()) == core::cmp::Ordering::Less {
            Some(Verdict::Wild)
        } else {
            None
        };
        if let Some(verdict) = verdict {
            return Ok(Classification {
                n,
                theta: r.theta.round_out(p),
                threshold: tau,
                verdict,
                precision_used: p,
            });
        }
        let next = p.doubled();
        if next.bits() > ceiling_bits || next.bits() == p.bits() {
            return Err(Error::UndecidableAtPrecision {
                n,
                ceiling: ceiling_bits,
            });
        }
        p = next;
    }
}

/// Scans [start, limit] for wild numbers, appending them in order to `out`.
///
/// Walks the grid cells [c_a − π, c_a + π) around centers c_a = π/2 + 2πa;
/// the cells tile the line, so every integer is owned by exactly one cell
/// and the output order is the natural order. Integers that pass the
/// double-precision distance test by `TRIAGE_MARGIN` are tame by the error
/// analysis on that constant; every other integer — every wild in
/// particular — is classified by interval arithmetic.
fn scan_into(
    start: u64,
    limit: u64,
    p: PrecisionBits,
    ceiling_bits: u32,
    ctx: &mut Ctx,
    out: &mut Vec<u64>,
) -> Result<()> {
    if limit < start {
        return Ok(());
    }
    let mut a = ((start as f64 - FRAC_PI_2) / TAU).round().max(0.0) as u64;
    let mut next_n = start;
    loop {
        let c = FRAC_PI_2 + TAU * a as f64;
        let cell_lo = {
            let lo = (c - PI).ceil();
            if lo < 1.0 {
                1
            } else {
                lo as u64
            }
        };
        // The cell is right-open, so an integer exactly at c + π (never
        // happens for irrational boundaries) would belong to the next cell.
        let cell_hi = (c + PI).ceil() as u64 - 1;
        let lo_n = cell_lo.max(next_n);
        let hi_n = cell_hi.min(limit);
        for n in lo_n..=hi_n {
            let nf = n as f64;
            let d = (nf - c).abs();
            let tau = 4.0 / nf.powf(0.25);
            if d >= tau + TRIAGE_MARGIN {
                continue;
            }
            let cls = classify_with(n, p, ceiling_bits, ctx)?;
            if cls.verdict == Verdict::Wild {
                out.push(n);
            }
        }
        if hi_n >= limit || cell_hi >= limit {
            return Ok(());
        }
        next_n = next_n.max(cell_hi + 1);
        a += 1;
    }
}

/// Builds the complete ordered wild table for [1, limit].
///
/// `p` is the starting precision for each classification (the adaptive loop
/// may exceed it for near-threshold indices; `precision_used` records the
/// starting value).
pub fn wild_up_to(limit: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<WildTable> {
    if limit == 0 {
        return Err(Error::InvalidIndex(0));
    }
    if limit > WILD_SCAN_LIMIT_MAX {
        return Err(Error::Domain("wild scan limit exceeds supported maximum"));
    }
    let mut wilds = Vec::new();
    scan_into(1, limit, p, DEFAULT_PRECISION_CEILING, ctx, &mut wilds)?;
    Ok(WildTable {
        scan_limit: limit,
        precision_used: p,
        wilds,
    })
}

/// Builds the wild table by classifying every integer in [1, limit]
/// individually — the slow reference route used to cross-check the cell
/// walk. Intended for moderate limits.
pub fn wild_up_to_exhaustive(limit: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<WildTable> {
    if limit == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let mut wilds = Vec::new();
    for n in 1..=limit {
        let cls = classify_with(n, p, DEFAULT_PRECISION_CEILING, ctx)?;
        if cls.verdict == Verdict::Wild {
            wilds.push(n);
        }
    }
    Ok(WildTable {
        scan_limit: limit,
        precision_used: p,
        wilds,
    })
}
