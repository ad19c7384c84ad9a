//! Exact continued fractions of `sqrt(d)`, Ostrowski numeration, and
//! multiplication by `sqrt(d)` carried out on digit representations.
//!
//! The field arithmetic in [`qfield`] is generic over an exact [`Scalar`];
//! everything built on top of it works with arbitrary-precision rationals
//! through the [`Rational`] and [`QuadRat`] aliases, because convergents
//! outgrow machine words within a few dozen terms.

pub mod audit;
pub mod cfrac;
pub mod error;
pub mod oracle;
pub mod ostrowski;
pub mod probes;
pub mod qfield;
pub mod scalar;
pub mod shiftcalc;
pub mod text;

pub use cfrac::{normalize_d, CfExpansion, ShiftConstants};
pub use error::{Error, Result};
pub use ostrowski::{DigitKind, OstDigits};
pub use qfield::Quad;
pub use scalar::Scalar;
pub use shiftcalc::{GenDigits, Weights};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Element of `Q(sqrt(d))` with arbitrary-precision rational coefficients.
pub type QuadRat = Quad<Rational>;

/// Machine-word variants, handy for small hand computations.
pub type QuadI64 = Quad<num_rational::Ratio<i64>>;
pub type QuadI128 = Quad<num_rational::Ratio<i128>>;

/// Default number of convergents materialized by the command-line tools.
pub const DEFAULT_DEPTH: usize = 64;
