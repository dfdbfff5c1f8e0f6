//! Series terms and partial sums: a certified interval engine and a fast
//! extended-precision engine.
//!
//! The certified engine carries every quantity as an enclosure; its partial
//! sums are true interval statements. The fast engine computes point values
//! at a fixed 128-bit working precision with range reduction through a
//! ≥256-bit π, and attaches a worst-case error estimate
//! |Δterm| ≤ term·n·2⁻⁹⁰ + 2⁻⁹⁰ per term; it exists so that 10⁷-term runs
//! finish in seconds rather than hours.
//!
//! Both engines sum in fixed chunks of 2¹⁶ terms folded in chunk order, so
//! a parallel driver that evaluates chunks on any number of workers and
//! merges them in index order reproduces the single-threaded bit pattern
//! exactly.

use astro_float::{BigFloat, RoundingMode};
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::interval::{bf_u64, cmp_bf, widen_up, Interval};
use crate::precision::{bit_length, PrecisionBits};
use crate::reduce::reduce;
use crate::sin::sin_enclosure;
use crate::Ctx;

/// Terms per summation chunk. Fixed: the chunk grid is part of the
/// deterministic reduction shape, not a tuning knob.
pub const CHUNK_TERMS: u64 = 1 << 16;

/// Working mantissa of the fast engine, in bits.
pub const FAST_PRECISION: u32 = 128;

/// Reduction target of the fast engine; the internal reduction precision is
/// this plus index-length headroom, so π enters at no less than 256 bits.
const FAST_REDUCE_TARGET: u32 = 256;

/// Guard on the exponent n·ln(base) below which the certified power is
/// returned as [0, 2⁻¹⁰⁰⁰] instead of being pushed through exp. This keeps
/// far clear of the substrate's exponent floor; the cutoff corresponds to
/// indices around 10⁸, far beyond every certified-engine use.
const EXP_ARG_FLOOR: f64 = -2.0e8;

/// Which summation engine produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Interval arithmetic end to end; results are certified enclosures.
    Certified,
    /// Fixed-precision point arithmetic with an attached error estimate.
    Fast,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::Certified => f.write_str("certified"),
            Engine::Fast => f.write_str("fast"),
        }
    }
}

/// One evaluated series term.
#[derive(Debug, Clone)]
pub struct TermValue {
    /// Term index.
    pub n: u64,
    /// Enclosure (certified engine) or point value (fast engine) of
    /// (2/3 + ⅓ sin n)ⁿ / n. Always a subset of [0, 1/n rounded up].
    pub value: Interval,
}

/// A partial sum Σ_{n=1}^{N} of the series.
#[derive(Debug, Clone)]
pub struct PartialSum {
    /// N, the last index included.
    pub upto_n: u64,
    /// Certified: enclosure of the true partial sum. Fast: point value.
    pub value: Interval,
    /// Engine that produced `value`.
    pub engine: Engine,
    /// Fast engine only: worst-case estimate of |computed − true|.
    pub error_estimate: Option<f64>,
    /// Number of terms actually evaluated (equals `upto_n`).
    pub terms_evaluated: u64,
}

/// Encloses the base (2 + sin n)/3 at precision `pc`, clamped into [0, 1].
fn base_enclosure(n: u64, pc: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    let s = sin_enclosure(n, pc, ctx)?;
    let num = Interval::from_u64(2).add(&s, pc);
    let base = num.div(&Interval::from_u64(3), pc)?;
    // sin n ∈ [−1, 1] forces the true base into [1/3, 1]; intersecting with
    // the unit range is sound and keeps later power bounds clean.
    let unit = Interval::from_endpoints(BigFloat::from_word(0, 64), BigFloat::from_word(1, 64))
        .expect("static endpoints");
    base.intersect(&unit)
}

/// Certified enclosure of the n-th power (2/3 + ⅓ sin n)ⁿ — the quantity
/// bounded by the tame decay inequality — at precision `p`.
///
/// Uses exp(n·ln base) while the base is strictly positive (it always is,
/// since the base exceeds 1/3) so the relative width stays O(n·2⁻ᵖ) rather
/// than compounding n-fold; repeated squaring remains as the fallback for a
/// base enclosure touching zero.
pub fn power_certified(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let pc = p.plus(bit_length(n) + 8);
    let base = base_enclosure(n, pc, ctx)?;
    let zero = BigFloat::from_word(0, 64);
    let result = if cmp_bf(base.lo(), &zero) == Ordering::Greater {
        let ln_b = base.ln(pc, ctx)?;
        let arg = ln_b.mul(&Interval::from_u64(n), pc);
        if crate::f64conv::f64_up(arg.hi()) < EXP_ARG_FLOOR {
            // The power underflows every representable scale that matters;
            // [0, 2⁻¹⁰⁰⁰] is a sound and far-from-tight enclosure.
            let mut tiny = BigFloat::from_word(1, 64);
            tiny.set_exponent(-1000);
            Interval::from_endpoints(zero.clone(), tiny).expect("static endpoints")
        } else {
            arg.exp(pc, ctx)
        }
    } else {
        base.pow_uint(n, pc)
    };
    // The true power lies in [0, 1]; clamp after rounding out.
    let unit = Interval::from_endpoints(BigFloat::from_word(0, 64), BigFloat::from_word(1, 64))
        .expect("static endpoints");
    result.round_out(p).intersect(&unit)
}

/// Certified enclosure of term n at precision `p`.
pub fn term_certified(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<TermValue> {
    let pc = p.plus(bit_length(n) + 8);
    let base = base_enclosure(n, pc, ctx)?;
    let zero = BigFloat::from_word(0, 64);
    let power = if cmp_bf(base.lo(), &zero) == Ordering::Greater {
        let ln_b = base.ln(pc, ctx)?;
        let arg = ln_b.mul(&Interval::from_u64(n), pc);
        if crate::f64conv::f64_up(arg.hi()) < EXP_ARG_FLOOR {
            let mut tiny = BigFloat::from_word(1, 64);
            tiny.set_exponent(-1000);
            Interval::from_endpoints(zero.clone(), tiny).expect("static endpoints")
        } else {
            arg.exp(pc, ctx)
        }
    } else {
        base.pow_uint(n, pc)
    };
    let value = power.div(&Interval::from_u64(n), pc)?;
    // True term lies in [0, 1/n]; intersect with that range rounded outward.
    let inv_n_up = widen_up(
        &BigFloat::from_word(1, 64).div(&bf_u64(n), p.p(), RoundingMode::Up),
        p.p(),
    );
    let cap = Interval::from_endpoints(zero, inv_n_up).expect("ordered endpoints");
    let value = value.round_out(p).intersect(&cap)?;
    Ok(TermValue { n, value })
}

/// Point sine and cosine of an integer index for the fast engine.
///
/// The angle is reduced rigorously (π at ≥256 bits), then a midpoint is
/// taken; the total error is far below the 2⁻⁹⁰-scale budget declared for
/// fast terms.
fn fast_sin_cos(n: u64, ctx: &mut Ctx) -> Result<(BigFloat, BigFloat)> {
    let target = PrecisionBits::new(FAST_REDUCE_TARGET).expect("static precision");
    let r = reduce(n, target, ctx)?;
    let pm = PrecisionBits::new(192).expect("static precision");
    let theta = r.theta.midpoint(pm);
    let sp = 160usize;
    let sin_n = theta.cos(sp, RoundingMode::ToEven, &mut ctx.cc);
    let cos_n = theta.sin(sp, RoundingMode::ToEven, &mut ctx.cc).neg();
    Ok((sin_n, cos_n))
}

/// Fast point evaluation of term n with the engine's fixed precisions.
pub fn term_fast(n: u64, ctx: &mut Ctx) -> Result<TermValue> {
    let (sin_n, _) = fast_sin_cos(n, ctx)?;
    let value = fast_term_from_sin(n, &sin_n);
    Ok(TermValue { n, value })
}

/// Assembles a fast term from a point estimate of sin n.
fn fast_term_from_sin(n: u64, sin_n: &BigFloat) -> Interval {
    let p = FAST_PRECISION as usize;
    let rm = RoundingMode::ToEven;
    let two = BigFloat::from_word(2, 64);
    let three = BigFloat::from_word(3, 64);
    let s = two.add(sin_n, p, rm).div(&three, p, rm);
    let pw = s.powi(n as usize, p, rm);
    let t = if pw.is_nan() || pw.is_inf() {
        // Power underflowed the representable exponent range; the true term
        // is far below the engine's 2⁻⁹⁰ error floor.
        BigFloat::from_word(0, 64)
    } else {
        pw.div(&bf_u64(n), p, rm)
    };
    Interval::point(t).expect("finite point")
}

/// Number of fixed-size chunks covering terms 1…n_max.
pub fn chunk_count(n_max: u64) -> u64 {
    n_max.div_ceil(CHUNK_TERMS)
}

/// Inclusive index range [first, last] of chunk `chunk` (0-based) for a sum
/// to n_max.
pub fn chunk_range(chunk: u64, n_max: u64) -> Result<(u64, u64)> {
    let first = chunk
        .checked_mul(CHUNK_TERMS)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Numeric("chunk index overflow"))?;
    if first > n_max {
        return Err(Error::Numeric("chunk index out of range"));
    }
    let last = (first + CHUNK_TERMS - 1).min(n_max);
    Ok((first, last))
}

/// Fast-engine result for one chunk: a compensated pair plus its range.
#[derive(Debug, Clone)]
pub struct ChunkFast {
    /// Chunk index (0-based).
    pub index: u64,
    /// First term index of the chunk.
    pub first_n: u64,
    /// Last term index of the chunk.
    pub last_n: u64,
    /// Compensated main accumulator at `FAST_PRECISION` bits.
    pub sum: BigFloat,
    /// Accumulated compensation.
    pub compensation: BigFloat,
}

/// One step of Neumaier's compensated summation at precision `p`.
fn neumaier_add(sum: &mut BigFloat, comp: &mut BigFloat, x: &BigFloat, p: usize) {
    let rm = RoundingMode::ToEven;
    let t = sum.add(x, p, rm);
    let corr = if cmp_bf(&sum.abs(), &x.abs()) != Ordering::Less {
        sum.sub(&t, p, rm).add(x, p, rm)
    } else {
        x.sub(&t, p, rm).add(sum, p, rm)
    };
    *comp = comp.add(&corr, p, rm);
    *sum = t;
}

/// Evaluates one fast-engine chunk.
///
/// The first index is reduced in full; successive sines advance by the
/// angle-addition recurrence with fixed sin 1 / cos 1 constants, whose
/// rotation is norm-preserving, so drift over a 2¹⁶-term chunk stays near
/// 2⁻¹¹⁰ — orders of magnitude inside the declared per-term bound.
pub fn chunk_fast(chunk: u64, n_max: u64, ctx: &mut Ctx) -> Result<ChunkFast> {
    let (first, last) = chunk_range(chunk, n_max)?;
    let p = FAST_PRECISION as usize;
    let rm = RoundingMode::ToEven;
    let (mut sin_n, mut cos_n) = fast_sin_cos(first, ctx)?;
    let one = BigFloat::from_word(1, 64);
    let sin1 = one.sin(p, rm, &mut ctx.cc);
    let cos1 = one.cos(p, rm, &mut ctx.cc);
    let mut sum = BigFloat::from_word(0, 64);
    let mut comp = BigFloat::from_word(0, 64);
    for n in first..=last {
        let term = fast_term_from_sin(n, &sin_n);
        neumaier_add(&mut sum, &mut comp, term.lo(), p);
        if n < last {
            let s_next = sin_n
                .mul(&cos1, p, rm)
                .add(&cos_n.mul(&sin1, p, rm), p, rm);
            let c_next = cos_n
                .mul(&cos1, p, rm)
                .sub(&sin_n.mul(&sin1, p, rm), p, rm);
            sin_n = s_next;
            cos_n = c_next;
        }
    }
    Ok(ChunkFast {
        index: chunk,
        first_n: first,
        last_n: last,
        sum,
        compensation: comp,
    })
}

/// Certified enclosure of one chunk's sum, accumulated with 32 guard bits.
pub fn chunk_certified(chunk: u64, n_max: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    let (first, last) = chunk_range(chunk, n_max)?;
    let pacc = p.plus(32);
    let zero = BigFloat::from_word(0, 64);
    let mut acc = Interval::from_endpoints(zero.clone(), zero).expect("static endpoints");
    for n in first..=last {
        let term = term_certified(n, p, ctx)?;
        acc = acc.add(&term.value, pacc);
    }
    Ok(acc)
}

/// Deterministic merge state for fast-engine chunks.
///
/// Chunks must be absorbed in index order; the merge is a fixed-shape left
/// fold, so the result is bit-identical no matter how many workers produced
/// the chunks.
#[derive(Debug, Clone)]
pub struct FastSumParts {
    sum: BigFloat,
    comp: BigFloat,
    next_n: u64,
}

impl FastSumParts {
    /// Empty accumulator expecting the chunk that starts at term 1.
    pub fn new() -> Self {
        FastSumParts {
            sum: BigFloat::from_word(0, 64),
            comp: BigFloat::from_word(0, 64),
            next_n: 1,
        }
    }

    /// Folds in the next chunk; rejects gaps or misordered absorption.
    pub fn absorb(&mut self, chunk: &ChunkFast) -> Result<()> {
        if chunk.first_n != self.next_n {
            return Err(Error::Numeric("fast chunks absorbed out of order"));
        }
        let p = FAST_PRECISION as usize;
        neumaier_add(&mut self.sum, &mut self.comp, &chunk.sum, p);
        neumaier_add(&mut self.sum, &mut self.comp, &chunk.compensation, p);
        self.next_n = chunk.last_n + 1;
        Ok(())
    }

    /// Finishes the sum over terms 1…N.
    pub fn finish(self, n_max: u64) -> Result<PartialSum> {
        if self.next_n != n_max + 1 {
            return Err(Error::Numeric("fast sum finished before covering range"));
        }
        let p = FAST_PRECISION as usize;
        let value = self.sum.add(&self.comp, p, RoundingMode::ToEven);
        let estimate = fast_error_estimate(n_max, crate::f64conv::f64_up(&value.abs()));
        Ok(PartialSum {
            upto_n: n_max,
            value: Interval::point(value).expect("finite sum"),
            engine: Engine::Fast,
            error_estimate: Some(estimate),
            terms_evaluated: n_max,
        })
    }
}

impl Default for FastSumParts {
    fn default() -> Self {
        Self::new()
    }
}

/// Deterministic merge state for certified-engine chunks.
///
/// The counterpart of [`FastSumParts`]: chunk enclosures are folded in
/// index order with 32 guard bits, exactly as the sequential evaluator
/// does, so a parallel producer yields bit-identical endpoints.
#[derive(Debug, Clone)]
pub struct CertifiedSumParts {
    acc: Interval,
    next_n: u64,
    p: PrecisionBits,
}

impl CertifiedSumParts {
    /// Empty accumulator targeting final precision `p`.
    pub fn new(p: PrecisionBits) -> Self {
        let zero = BigFloat::from_word(0, 64);
        CertifiedSumParts {
            acc: Interval::from_endpoints(zero.clone(), zero).expect("static endpoints"),
            next_n: 1,
            p,
        }
    }

    /// Folds in the enclosure of chunk `chunk` of a sum to `n_max`;
    /// rejects gaps or misordered absorption.
    pub fn absorb(&mut self, chunk: u64, n_max: u64, value: &Interval) -> Result<()> {
        let (first, last) = chunk_range(chunk, n_max)?;
        if first != self.next_n {
            return Err(Error::Numeric("certified chunks absorbed out of order"));
        }
        self.acc = self.acc.add(value, self.p.plus(32));
        self.next_n = last + 1;
        Ok(())
    }

    /// Finishes the sum over terms 1…N.
    pub fn finish(self, n_max: u64) -> Result<PartialSum> {
        if self.next_n != n_max + 1 {
            return Err(Error::Numeric("certified sum finished before covering range"));
        }
        Ok(PartialSum {
            upto_n: n_max,
            value: self.acc.round_out(self.p),
            engine: Engine::Certified,
            error_estimate: None,
            terms_evaluated: n_max,
        })
    }
}

/// Worst-case error estimate for a fast partial sum over N terms.
///
/// Per-term propagation is bounded by term·n·2⁻⁹⁰ + 2⁻⁹⁰; summing gives
/// (Σ term)·N·2⁻⁹⁰ + N·2⁻⁹⁰, plus a compensated-summation residue well
/// under N·2⁻¹⁰⁰. A factor of two absorbs the double-precision evaluation
/// of the estimate itself.
fn fast_error_estimate(n_terms: u64, sum_abs: f64) -> f64 {
    let nf = n_terms as f64;
    let per_term = (sum_abs + 1.0) * nf * (2.0f64).powi(-90) + nf * (2.0f64).powi(-90);
    let summation = nf * (2.0f64).powi(-100);
    2.0 * (per_term + summation)
}

/// Partial sum of terms 1…N with the chosen engine.
///
/// `p` is the certified engine's target precision; the fast engine always
/// runs at its fixed precisions and ignores `p`.
pub fn partial_sum(n_max: u64, engine: Engine, p: PrecisionBits, ctx: &mut Ctx) -> Result<PartialSum> {
    partial_sum_with_progress(n_max, engine, p, ctx, &mut |_| {})
}

/// [`partial_sum`] with a progress callback invoked at every million-term
/// boundary with the count of terms completed.
pub fn partial_sum_with_progress(
    n_max: u64,
    engine: Engine,
    p: PrecisionBits,
    ctx: &mut Ctx,
    progress: &mut dyn FnMut(u64),
) -> Result<PartialSum> {
    if n_max == 0 {
        return Err(Error::InvalidIndex(0));
    }
    const PROGRESS_STEP: u64 = 1_000_000;
    let chunks = chunk_count(n_max);
    match engine {
        Engine::Fast => {
            let mut parts = FastSumParts::new();
            for c in 0..chunks {
                let chunk = chunk_fast(c, n_max, ctx)?;
                let (first, last) = (chunk.first_n, chunk.last_n);
                parts.absorb(&chunk)?;
                emit_progress(first, last, PROGRESS_STEP, progress);
            }
            parts.finish(n_max)
        }
        Engine::Certified => {
            let mut parts = CertifiedSumParts::new(p);
            for c in 0..chunks {
                let (first, last) = chunk_range(c, n_max)?;
                let chunk = chunk_certified(c, n_max, p, ctx)?;
                parts.absorb(c, n_max, &chunk)?;
                emit_progress(first, last, PROGRESS_STEP, progress);
            }
            parts.finish(n_max)
        }
    }
}

/// Reports every multiple of `step` crossed by the range [first, last].
fn emit_progress(first: u64, last: u64, step: u64, progress: &mut dyn FnMut(u64)) {
    let mut m = (first - 1) / step + 1;
    while m * step <= last {
        progress(m * step);
        m += 1;
    }
}
