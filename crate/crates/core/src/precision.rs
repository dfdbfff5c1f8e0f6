//! Binary mantissa precision as a validated newtype.

use crate::error::{Error, Result};

/// Mantissa precision in bits. Guaranteed ≥ 32.
///
/// The substrate rounds precisions up to whole 64-bit words internally;
/// width guarantees in this crate are stated against the requested bit
/// count, which is always the weaker (safe) side of that rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrecisionBits(u32);

impl PrecisionBits {
    /// Default working precision for user-facing operations.
    pub const DEFAULT: PrecisionBits = PrecisionBits(96);

    /// Validates `bits ≥ 32`.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 32 {
            return Err(Error::BadPrecision(bits));
        }
        Ok(PrecisionBits(bits))
    }

    /// The raw bit count.
    pub fn bits(self) -> u32 {
        self.0
    }

    /// The bit count as the substrate's precision parameter type.
    pub(crate) fn p(self) -> usize {
        self.0 as usize
    }

    /// Doubled precision, saturating (used by adaptive refinement loops).
    pub fn doubled(self) -> PrecisionBits {
        PrecisionBits(self.0.saturating_mul(2))
    }

    /// This precision raised by `extra` guard bits.
    pub(crate) fn plus(self, extra: u32) -> PrecisionBits {
        PrecisionBits(self.0.saturating_add(extra))
    }
}

/// Number of bits needed to represent `n` (= floor(log2 n) + 1 for n ≥ 1).
/// Used as the cancellation guard when reducing n modulo 2π.
pub(crate) fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_precision_below_32() {
        assert_eq!(PrecisionBits::new(31), Err(Error::BadPrecision(31)));
        assert_eq!(PrecisionBits::new(0), Err(Error::BadPrecision(0)));
        assert!(PrecisionBits::new(32).is_ok());
        assert_eq!(PrecisionBits::DEFAULT.bits(), 96);
    }

    #[test]
    fn bit_length_matches_log2() {
        assert_eq!(bit_length(1), 1);
        assert_eq!(bit_length(2), 2);
        assert_eq!(bit_length(3), 2);
        assert_eq!(bit_length(1 << 20), 21);
        assert_eq!(bit_length(u64::MAX), 64);
    }
}
