//! Canonical enclosures of π.
//!
//! For each precision the enclosure has one canonical bit pattern:
//! `[v − ulp, v + ulp]` where `v` is the substrate's π rounded toward −∞ at
//! that precision. The two-ulp width stays comfortably within the four-ulp
//! contract and, because both endpoints are derived from `v` by exact
//! one-ulp steps, an enclosure reconstructed from a serialized lower
//! endpoint is bit-identical to a freshly computed one. Serialization
//! therefore can never alter a downstream result — it only skips the
//! constant's recomputation.

use alloc::vec::Vec;
use astro_float::{BigFloat, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::interval::{ulp_at, Interval};
use crate::precision::PrecisionBits;
use crate::Ctx;

/// The binary exponent of π in the substrate's normalization
/// (π = 0.110010010…₂ × 2²).
const PI_EXPONENT: astro_float::Exponent = 2;

/// Mantissa word width in bits.
const WORD_BIT_SIZE: usize = core::mem::size_of::<astro_float::Word>() * 8;

fn enclosure_from_point(v: &BigFloat, p: PrecisionBits) -> Interval {
    let u = ulp_at(v, p.p());
    // Both endpoints are representable at precision p (a one-ulp step can
    // carry across the mantissa but never needs extra bits), so these
    // directed operations are exact.
    let lo = v.sub(&u, p.p(), RoundingMode::Down);
    let hi = v.add(&u, p.p(), RoundingMode::Up);
    Interval::from_endpoints(lo, hi).expect("pi endpoints are finite and ordered")
}

/// Returns the canonical enclosure of π at precision `p`.
///
/// Results are memoized per precision inside `ctx`; repeated calls clone the
/// cached value and are cheap.
pub fn pi_enclosure(p: PrecisionBits, ctx: &mut Ctx) -> Interval {
    if let Some((_, iv)) = ctx.pi_cache.iter().find(|(b, _)| *b == p.bits()) {
        return iv.clone();
    }
    let v = ctx.cc.pi(p.p(), RoundingMode::Down);
    let iv = enclosure_from_point(&v, p);
    ctx.pi_cache.push((p.bits(), iv.clone()));
    iv
}

/// Serializes the lower endpoint's mantissa as little-endian bytes.
///
/// The partner constructor [`pi_from_lo_mantissa_le_bytes`] rebuilds the
/// full enclosure from these bytes; together they are the stable on-disk
/// representation used by the CLI's constant cache.
pub fn pi_lo_mantissa_le_bytes(iv: &Interval) -> Vec<u8> {
    let (words, _prec, sign, exponent, _inexact) =
        iv.lo().as_raw_parts().expect("pi endpoint is finite");
    assert_eq!(sign, Sign::Pos, "pi is positive");
    assert_eq!(exponent, PI_EXPONENT, "pi has binary exponent 2");
    let mut bytes = Vec::with_capacity(words.len() * (WORD_BIT_SIZE / 8));
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    bytes
}

/// Coarse plausibility window for a claimed enclosure endpoint. The edges
/// are deliberately loose decimal fences, not attempts at the constant:
/// anything outside is certainly corrupt; a wide net keeps the check
/// independent of the precision in play.
#[allow(clippy::approx_constant)]
fn within_coarse_window(x: &BigFloat) -> bool {
    let approx = crate::f64conv::f64_down(x);
    3.141592 < approx && approx < 3.141593
}

/// Checks that `iv` has the canonical enclosure shape for precision `p`:
/// positive normalized endpoints with the upper exactly two ulp above the
/// lower, and a lower endpoint in π's coarse window.
pub(crate) fn validate_enclosure_shape(iv: &Interval, p: PrecisionBits) -> Result<()> {
    if !within_coarse_window(iv.lo()) {
        return Err(Error::Numeric("pi enclosure value out of range"));
    }
    let u = ulp_at(iv.lo(), p.p());
    let hi = iv
        .lo()
        .add(&u, p.p(), RoundingMode::Up)
        .add(&u, p.p(), RoundingMode::Up);
    let expected = Interval::from_endpoints(iv.lo().clone(), hi)?;
    if !iv.raw_eq(&expected) {
        return Err(Error::Numeric("pi enclosure has non-canonical endpoints"));
    }
    Ok(())
}

/// Rebuilds the canonical enclosure of π at `bits` of precision from a
/// serialized lower-endpoint mantissa.
///
/// Validates the payload length, mantissa normalization and coarse value
/// range, so truncated, shifted or grossly wrong payloads are reported as
/// corruption. The format carries no checksum, so a flipped low mantissa
/// bit is indistinguishable from a legitimate value — the cache directory
/// is trusted state, exactly like the binary itself. A valid payload
/// always reconstructs the canonical enclosure bit for bit.
pub fn pi_from_lo_mantissa_le_bytes(bits: u32, bytes: &[u8]) -> Result<Interval> {
    let p = PrecisionBits::new(bits)?;
    let word_bytes = WORD_BIT_SIZE / 8;
    let word_count = p.p().div_ceil(WORD_BIT_SIZE);
    if bytes.len() != word_count * word_bytes {
        return Err(Error::Numeric("pi cache payload length mismatch"));
    }
    let mut words = Vec::with_capacity(word_count);
    for chunk in bytes.chunks_exact(word_bytes) {
        let mut buf = [0u8; 8];
        buf.copy_from_slice(chunk);
        words.push(astro_float::Word::from_le_bytes(buf));
    }
    let top = *words.last().expect("at least one word");
    if top >> (WORD_BIT_SIZE - 1) != 1 {
        return Err(Error::Numeric("pi cache mantissa not normalized"));
    }
    // The substrate counts precision in whole words, and a normalized
    // mantissa's significant bit length is its full storage width.
    let lo = BigFloat::from_raw_parts(
        &words,
        words.len() * WORD_BIT_SIZE,
        Sign::Pos,
        PI_EXPONENT,
        false,
    );
    // Coarse value check: the stored endpoint must round into a narrow
    // window around π.
    if !within_coarse_window(&lo) {
        return Err(Error::Numeric("pi cache value out of range"));
    }
    let u = ulp_at(&lo, p.p());
    let hi = lo.add(&u, p.p(), RoundingMode::Up).add(&u, p.p(), RoundingMode::Up);
    Interval::from_endpoints(lo, hi)
}
