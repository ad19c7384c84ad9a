//! Ostrowski numeration based on `sqrt(d)`.
//!
//! Digits are stored least significant first: `digits[k]` is the
//! coefficient `b_{k+1}` of `q_k` (naturals) or of `beta_k` (reals). A
//! digit string is valid when `b_1 < a_1`, `b_k <= a_k`, and `b_k = a_k`
//! forces `b_{k-1} = 0`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cfrac::CfExpansion;
use crate::error::{Error, Result};
use crate::text::{format_rational, split_radicand};
use crate::{QuadRat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitKind {
    /// Coefficients of the `q_k`, representing a natural number.
    Natural,
    /// Coefficients of the `beta_k`, representing a real in `I`.
    Real,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstDigits<'cf> {
    cf: &'cf CfExpansion,
    digits: Vec<u64>,
    kind: DigitKind,
}

impl<'cf> OstDigits<'cf> {
    /// Wraps a digit string without validating it; trailing zeros are dropped.
    pub fn new(cf: &'cf CfExpansion, mut digits: Vec<u64>, kind: DigitKind) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Self { cf, digits, kind }
    }

    pub fn cf(&self) -> &'cf CfExpansion {
        self.cf
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn kind(&self) -> DigitKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn with_kind(&self, kind: DigitKind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }

    /// Index of the first digit breaking the Ostrowski constraints.
    pub fn first_violation(&self) -> Option<usize> {
        first_violation(self.cf, &self.digits)
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.first_violation() {
            None => Ok(()),
            Some(index) => Err(Error::InvalidDigits { index }),
        }
    }

    /// Greedy encoding of `n`: take the largest `q_k <= remainder` as often
    /// as it fits, then move down.
    pub fn encode_nat(n: &BigInt, cf: &'cf CfExpansion) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::OutOfDomain(format!("{n} is negative")));
        }
        let depth = cf.depth();
        if n >= cf.q(depth) {
            return Err(Error::DepthExceeded {
                needed: depth + 1,
                depth,
            });
        }
        let mut top = 0;
        while top < depth && cf.q(top + 1) <= n {
            top += 1;
        }
        let mut digits = vec![0u64; top + 1];
        let mut rem = n.clone();
        for k in (0..=top).rev() {
            let b = &rem / cf.q(k);
            rem -= &b * cf.q(k);
            digits[k] = b.to_u64().expect("digit bounded by a partial quotient");
        }
        Ok(Self::new(cf, digits, DigitKind::Natural))
    }

    /// `sum_k digits[k] * q_k`. Panics if the digits run past the depth of
    /// the expansion.
    pub fn decode_nat(&self) -> BigInt {
        weighted_sums(self.cf, &self.digits, 0).0
    }

    /// `f = sum_k digits[k] * beta_k`.
    pub fn f_of(&self) -> QuadRat {
        let (sq, sp) = weighted_sums(self.cf, &self.digits, 0);
        self.cf
            .sqrt_d()
            .sibling(-Rational::from_integer(sp), Rational::from_integer(sq))
    }

    /// Splits `N * sqrt(d)` into the integer `P = sum_k b_{k+1} p_k` and the
    /// real with the same digits, using `q_k sqrt(d) = p_k + beta_k`.
    pub fn mult_nat_by_sqrt(&self) -> (BigInt, OstDigits<'cf>) {
        let p = weighted_sums(self.cf, &self.digits, 0).1;
        (p, self.with_kind(DigitKind::Real))
    }

    /// First `len` digits of the real Ostrowski expansion of `c` in `I`.
    ///
    /// Digits are chosen left to right. A candidate digit is accepted when
    /// the remaining value lies in the exact range reachable by valid tails,
    /// and exactly one candidate must qualify at each position.
    pub fn encode_real(c: &QuadRat, cf: &'cf CfExpansion, len: usize) -> Result<Self> {
        if !cf.in_interval(c) {
            return Err(Error::OutOfInterval(c.to_string()));
        }
        cf.require(len + 1)?;
        let mut digits = Vec::with_capacity(len);
        let mut rem = c.clone();
        let mut prev = 0u64;
        for j in 0..len {
            let a = cf.digit_bound(j + 1);
            let cap = if j == 0 || prev > 0 { a - 1 } else { a };
            let next_a = cf.digit_bound(j + 2);
            let mut chosen = None;
            for b in 0..=cap {
                let r = &rem - &cf.beta(j).scale(&Rational::from_integer(b.into()));
                let next_cap = if b > 0 { next_a - 1 } else { next_a };
                if tail_range_contains(cf, j + 1, next_cap, &r) {
                    if chosen.is_some() {
                        return Err(Error::VerificationFailed(format!(
                            "two admissible digits at position {j} for {c}"
                        )));
                    }
                    chosen = Some((b, r));
                }
            }
            let (b, r) = chosen.ok_or_else(|| {
                Error::VerificationFailed(format!("no admissible digit at position {j} for {c}"))
            })?;
            digits.push(b);
            rem = r;
            prev = b;
        }
        Ok(Self::new(cf, digits, DigitKind::Real))
    }

    /// Parses `b1,b2,...@d=<rational>` against an expansion of the same `d`
    /// and validates the digits.
    pub fn from_text(s: &str, cf: &'cf CfExpansion, kind: DigitKind) -> Result<Self> {
        let (digits, d) = parse_digit_list(s)?;
        if let Some(d) = d {
            if &d != cf.d() {
                return Err(Error::MixedRadicand(d.to_string(), cf.d().to_string()));
            }
        }
        let x = Self::new(cf, digits, kind);
        if !x.is_empty() {
            cf.require(x.digits.len() - 1)?;
        }
        x.ensure_valid()?;
        Ok(x)
    }
}

impl fmt::Display for OstDigits<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "{}@d={}", body.join(","), format_rational(self.cf.d()))
    }
}

/// Splits a digit string into its digits and optional radicand suffix.
pub fn parse_digit_list(s: &str) -> Result<(Vec<u64>, Option<Rational>)> {
    let (body, d) = split_radicand(s)?;
    if body.is_empty() {
        return Ok((Vec::new(), d));
    }
    let digits = body
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad digit {t:?}")))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok((digits, d))
}

pub(crate) fn first_violation(cf: &CfExpansion, digits: &[u64]) -> Option<usize> {
    digits.iter().enumerate().find_map(|(k, &b)| {
        let a = cf.digit_bound(k + 1);
        let bad = if k == 0 {
            b >= a
        } else {
            b > a || (b == a && digits[k - 1] != 0)
        };
        bad.then_some(k)
    })
}

/// `(sum_k b_k q_{k+shift}, sum_k b_k p_{k+shift})`.
pub(crate) fn weighted_sums(cf: &CfExpansion, digits: &[u64], shift: usize) -> (BigInt, BigInt) {
    let mut sq = BigInt::zero();
    let mut sp = BigInt::zero();
    for (k, &b) in digits.iter().enumerate() {
        if b != 0 {
            sq += cf.q(k + shift) * b;
            sp += cf.p(k + shift) * b;
        }
    }
    (sq, sp)
}

/// Whether `r` is a value of `sum_{i >= j} b_{i+1} beta_i` over valid tails
/// whose first digit is at most `cap`.
///
/// The range is spanned by `-beta_j` and `cap*beta_j - beta_{j+1}`. The lower
/// end is reached by maximizing every negative term and is attained; the
/// upper end would need every positive term maximal forever and is not.
pub(crate) fn tail_range_contains(cf: &CfExpansion, j: usize, cap: u64, r: &QuadRat) -> bool {
    let e1 = -cf.beta(j);
    let e2 = &cf.beta(j).scale(&Rational::from_integer(cap.into())) - cf.beta(j + 1);
    let (lo, hi) = if j.is_multiple_of(2) {
        (e1, e2)
    } else {
        (e2, e1)
    };
    *r >= lo && *r < hi
}
