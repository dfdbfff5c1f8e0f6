//! Rigorous evaluation of the slowly convergent series Σ (2/3 + ⅓ sin n)ⁿ / n.
//!
//! Everything here is built around one discipline: every computed quantity is
//! carried as an [`Interval`] whose endpoints are rounded outward, so the true
//! real value is guaranteed to lie inside. On top of that substrate the crate
//! provides:
//!
//! - enclosures of π and argument reduction of integer indices modulo 2π
//!   ([`pi_enclosure`], [`reduce`]), accurate for n up to 2⁶³ − 1;
//! - sine enclosures for integer arguments ([`sin_enclosure`]);
//! - the tame/wild index classifier and wild-number enumeration
//!   ([`classify`], [`wild_up_to`]): n is tame when its distance to every
//!   point π/2 + 2πa is at least 4/n^¼, wild otherwise;
//! - two series engines ([`term_certified`], [`term_fast`], [`partial_sum`]):
//!   a certified interval engine and a fast fixed-precision engine with an
//!   attached worst-case error bound;
//! - numerical verification of the decay inequality for tame indices, the
//!   growth inequality for wild numbers, irrationality-gap checks for
//!   rational approximations of π, and effective tail bounds that certify
//!   the full sum is finite and below an explicit constant
//!   ([`verify_lemma_tame`], [`verify_wild_growth`], [`mahler_check`],
//!   [`tame_tail_bound`], [`wild_tail_bound`], [`total_upper_bound`],
//!   [`certified_enclosure`]).
//!
//! The crate is `no_std` (with `alloc`); all I/O, parallel drivers, caching
//! on disk and report serialization live in the companion CLI crate.
//!
//! Multi-precision arithmetic is backed by `astro-float`. Directed rounding
//! of its elementary operations is relied upon for `add`/`sub`/`mul` (whose
//! intermediates are exact before the final rounding step); results of
//! iterative algorithms (division, square root, transcendentals) are widened
//! by one unit in the last place on each side before being used as interval
//! endpoints, so a faithfully rounded result can never break an enclosure.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bounds;
mod classify;
mod error;
mod f64conv;
mod interval;
mod pi;
mod precision;
mod reduce;
mod series;
mod sin;

pub use bounds::{
    certified_enclosure, enclosure_with_tail, mahler_check, tame_bound, tame_tail_bound,
    total_upper_bound, verify_lemma_tame, verify_wild_growth, wild_tail_bound, CheckFailure,
    MahlerOutcome, RationalApprox, TailBound, VerifyReport,
};
pub use classify::{
    classify, classify_with, threshold, wild_up_to, wild_up_to_exhaustive, Classification,
    Verdict, WildTable, DEFAULT_PRECISION_CEILING, WILD_SCAN_LIMIT_MAX,
};
pub use error::{Error, Result};
pub use f64conv::{f64_down, f64_up};
pub use interval::Interval;
pub use pi::{pi_enclosure, pi_lo_mantissa_le_bytes, pi_from_lo_mantissa_le_bytes};
pub use precision::PrecisionBits;
pub use reduce::{reduce, ReducedAngle};
pub use series::{
    chunk_certified, chunk_count, chunk_fast, chunk_range, partial_sum,
    partial_sum_with_progress, power_certified, term_certified, term_fast,
    CertifiedSumParts, ChunkFast, Engine, FastSumParts, PartialSum, TermValue, CHUNK_TERMS,
    FAST_PRECISION,
};
pub use sin::sin_enclosure;

use astro_float::Consts;

/// Per-worker evaluation context: the constants cache of the arithmetic
/// substrate plus an append-only cache of π enclosures keyed by precision.
///
/// Every operation in this crate is a pure function of its arguments; the
/// context only memoizes constants, and since the substrate rounds
/// elementary results deterministically, cache state can never change a
/// computed value. Workers running concurrently each own their `Ctx`, which
/// makes all library entry points safe to drive from multiple threads
/// without shared mutable state.
pub struct Ctx {
    pub(crate) cc: Consts,
    pub(crate) pi_cache: alloc::vec::Vec<(u32, Interval)>,
}

impl Ctx {
    /// Creates a fresh context with empty constant caches.
    pub fn new() -> Self {
        // The substrate only fails here on allocation failure.
        let cc = Consts::new().expect("constants cache allocation");
        Ctx {
            cc,
            pi_cache: alloc::vec::Vec::new(),
        }
    }

    /// Installs a previously serialized π enclosure for precision `bits`,
    /// typically deserialized through [`pi_from_lo_mantissa_le_bytes`].
    ///
    /// The enclosure's canonical shape (upper endpoint exactly two ulp
    /// above the lower, value in π's window) is re-validated here, so a
    /// malformed interval is rejected instead of poisoning the cache. If
    /// an enclosure for `bits` is already cached, nothing changes.
    pub fn install_pi(&mut self, bits: u32, iv: Interval) -> Result<()> {
        let p = PrecisionBits::new(bits)?;
        pi::validate_enclosure_shape(&iv, p)?;
        if !self.pi_cache.iter().any(|(b, _)| *b == bits) {
            self.pi_cache.push((bits, iv));
        }
        Ok(())
    }

    /// The π enclosures currently cached, as (precision bits, enclosure)
    /// pairs in insertion order. Lets callers persist computed constants.
    pub fn cached_pis(&self) -> impl Iterator<Item = (u32, &Interval)> {
        self.pi_cache.iter().map(|(b, iv)| (*b, iv))
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Self::new()
    }
}
