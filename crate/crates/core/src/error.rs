//! Error values for domain violations and failed certifications.
//!
//! Domain problems are always signaled as distinct error values; no
//! operation silently widens a result to a NaN-like state.

use core::fmt;

/// Errors produced by the evaluation and verification operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An index argument was 0 where a positive integer is required.
    InvalidIndex(u64),
    /// A precision below the supported minimum of 32 bits was requested.
    BadPrecision(u32),
    /// Interval construction with lo > hi or non-finite endpoints.
    EmptyInterval,
    /// Division by an interval containing zero.
    DivisionByZero,
    /// An operation was applied outside its real domain (the name of the
    /// offending operation is carried for diagnostics).
    Domain(&'static str),
    /// The adaptive classifier could not separate |θ| from the threshold
    /// even at the precision ceiling; `n` is an extraordinary near-miss.
    UndecidableAtPrecision { n: u64, ceiling: u32 },
    /// An irrationality-gap check was invoked with |q| ≤ 1, violating the
    /// hypothesis of the underlying theorem.
    HypothesisViolation { p: i64, q: i64 },
    /// The arithmetic substrate returned a non-finite value where a finite
    /// one is guaranteed by construction; indicates an internal bug.
    Numeric(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidIndex(n) => write!(f, "index must be a positive integer, got {n}"),
            Error::BadPrecision(p) => write!(f, "precision must be at least 32 bits, got {p}"),
            Error::EmptyInterval => write!(f, "interval endpoints must be finite with lo <= hi"),
            Error::DivisionByZero => write!(f, "division by an interval containing zero"),
            Error::Domain(op) => write!(f, "argument outside the domain of {op}"),
            Error::UndecidableAtPrecision { n, ceiling } => write!(
                f,
                "classification of n={n} undecidable at precision ceiling {ceiling} bits"
            ),
            Error::HypothesisViolation { p, q } => {
                write!(f, "rational {p}/{q} violates the hypothesis |q| > 1")
            }
            Error::Numeric(what) => write!(f, "internal numeric failure in {what}"),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
