//! Sine enclosures for integer arguments.
//!
//! After reduction (see [`crate::reduce`]) the identity sin n = cos θ holds
//! with θ ∈ [−π − ε, π + ε]. Cosine is even, so only m = |θ| matters, and on
//! [0, π + ε] it attains its maximum over any subinterval at an endpoint
//! while −1 is always a valid lower bound. That turns the enclosure into two
//! endpoint evaluations plus a comparison against π — no branch ever relies
//! on where exactly θ fell.

use astro_float::{BigFloat, RoundingMode};
use core::cmp::Ordering;

use crate::error::Result;
use crate::interval::{cmp_bf, round_to, widen_down, widen_up, Interval};
use crate::pi::pi_enclosure;
use crate::precision::{bit_length, PrecisionBits};
use crate::reduce::reduce;
use crate::Ctx;

/// Encloses sin n for an integer index n ≥ 1 at precision `p`.
///
/// The result is always a subset of [−1, 1] and its width is bounded by
/// 2^(−p+4). Valid for n up to 2⁶³ − 1.
pub fn sin_enclosure(n: u64, p: PrecisionBits, ctx: &mut Ctx) -> Result<Interval> {
    let r = reduce(n, p, ctx)?;
    cos_of_reduced(&r.theta, n, p, ctx)
}

/// Encloses cos θ for a reduced angle enclosure θ ⊆ [−π − ε, π + ε].
///
/// Factored out so the series engines can reuse a reduction they already
/// paid for.
pub(crate) fn cos_of_reduced(
    theta: &Interval,
    n: u64,
    p: PrecisionBits,
    ctx: &mut Ctx,
) -> Result<Interval> {
    // Evaluate with guard bits, then round out to the requested precision.
    let pc = p.plus(8);
    let pw = p.plus(bit_length(n) + 16);
    let m = theta.abs();

    // Upper bound: cos restricted to [0, π + ε] has no interior maximum, so
    // the supremum over m is attained at one of the endpoints.
    let hi_a = widen_up(&m.lo().cos(pc.p(), RoundingMode::Up, &mut ctx.cc), pc.p());
    let hi_b = widen_up(&m.hi().cos(pc.p(), RoundingMode::Up, &mut ctx.cc), pc.p());
    let hi = if cmp_bf(&hi_a, &hi_b) == Ordering::Less {
        hi_b
    } else {
        hi_a
    };

    // Lower bound: if m can reach π, cosine may bottom out; −1 is then both
    // sound and nearly tight. Otherwise cos is decreasing on all of m.
    let pi_w = pi_enclosure(pw, ctx);
    let lo = if cmp_bf(m.hi(), pi_w.lo()) != Ordering::Less {
        BigFloat::from_i8(-1, pc.p())
    } else {
        widen_down(&m.hi().cos(pc.p(), RoundingMode::Down, &mut ctx.cc), pc.p())
    };

    // Round out to the target precision, then clamp into [−1, 1]: sin of a
    // real argument cannot leave that range, so intersecting preserves
    // containment while keeping the advertised invariant exact.
    let one = BigFloat::from_i8(1, p.p());
    let neg_one = BigFloat::from_i8(-1, p.p());
    let lo = round_to(&lo, p.p(), RoundingMode::Down);
    let hi = round_to(&hi, p.p(), RoundingMode::Up);
    let lo = if cmp_bf(&lo, &neg_one) == Ordering::Less {
        neg_one
    } else {
        lo
    };
    let hi = if cmp_bf(&hi, &one) == Ordering::Greater {
        one
    } else {
        hi
    };
    Interval::from_endpoints(lo, hi)
}
