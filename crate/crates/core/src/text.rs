//! Parsers for the plain-text forms used on the command line.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Parses `p/q`, an integer, a decimal (`0.25`) or scientific (`1e-9`,
/// `-2.5E3`) literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exponent - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let power = ten.pow(shift.unsigned_abs());
    let mut value = if shift >= 0 {
        Rational::from_integer(digits * power)
    } else {
        Rational::new(digits, power)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Splits `body@d=<rational>` into its body and radicand. A missing suffix
/// yields `None` for the radicand.
pub fn split_radicand(s: &str) -> Result<(&str, Option<Rational>)> {
    match s.rsplit_once('@') {
        Some((body, tail)) => {
            let d = tail
                .trim()
                .strip_prefix("d=")
                .ok_or_else(|| Error::Parse(format!("expected @d=<rational>, got {tail:?}")))?;
            Ok((body.trim(), Some(parse_rational(d)?)))
        }
        None => Ok((s.trim(), None)),
    }
}

/// Formats a rational the way [`parse_rational`] reads it back (`p` or `p/q`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
