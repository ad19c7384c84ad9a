//! Exact arithmetic in the real quadratic field `Q(sqrt(d))`.
//!
//! An element is stored as the pair `(a, b)` standing for `a + b*sqrt(d)`
//! together with its radicand. Since `d` is never a rational square the
//! representation is unique, so equality is plain component equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad<T> {
    a: T,
    b: T,
    d: T,
}

impl<T: Scalar> Quad<T> {
    /// Builds `a + b*sqrt(d)`, rejecting radicands that are not positive or
    /// that are squares of a rational.
    pub fn new(a: T, b: T, d: T) -> Result<Self> {
        check_radicand(&d)?;
        Ok(Self { a, b, d })
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: T) -> Result<Self> {
        Self::new(T::zero(), T::one(), d)
    }

    /// A rational embedded in the field of `self`.
    pub fn lift(&self, a: T) -> Self {
        Self {
            a,
            b: T::zero(),
            d: self.d.clone(),
        }
    }

    /// `a + b*sqrt(d)` sharing the radicand of `self`, without rechecking it.
    pub fn sibling(&self, a: T, b: T) -> Self {
        Self {
            a,
            b,
            d: self.d.clone(),
        }
    }

    pub fn zero_like(&self) -> Self {
        self.lift(T::zero())
    }

    pub fn one_like(&self) -> Self {
        self.lift(T::one())
    }

    pub fn rational_part(&self) -> &T {
        &self.a
    }

    pub fn irrational_part(&self) -> &T {
        &self.b
    }

    pub fn radicand(&self) -> &T {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        self.sibling(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - d*b^2`, the product of `self` with its conjugate.
    pub fn norm(&self) -> T {
        self.a.clone() * self.a.clone() - self.d.clone() * self.b.clone() * self.b.clone()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::MixedRadicand(
                self.d.to_string(),
                other.d.to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.sibling(
            self.a.clone() + other.a.clone(),
            self.b.clone() + other.b.clone(),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.sibling(
            self.a.clone() - other.a.clone(),
            self.b.clone() - other.b.clone(),
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (a1, b1) = (&self.a, &self.b);
        let (a2, b2) = (&other.a, &other.b);
        let a = a1.clone() * a2.clone() + b1.clone() * b2.clone() * self.d.clone();
        let b = a1.clone() * b2.clone() + a2.clone() * b1.clone();
        Ok(self.sibling(a, b))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse via the conjugate: `1/x = conj(x) / norm(x)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(self.sibling(self.a.clone() / n.clone(), -self.b.clone() / n))
    }

    pub fn scale(&self, k: &T) -> Self {
        self.sibling(self.a.clone() * k.clone(), self.b.clone() * k.clone())
    }

    /// Sign of the real number `a + b*sqrt(d)`, decided exactly.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == Ordering::Equal || sa == sb {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: the term with the larger square wins. The squares
        // cannot tie because d is not a rational square.
        if self.a.cmp_square(&self.b, &self.d) == Ordering::Greater {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// The integer `n` (as an integral scalar) with `n <= self < n + 1`.
    ///
    /// Brackets by doubling away from zero, then bisects; every step is a
    /// sign test on `self - k`.
    pub fn floor(&self) -> T {
        if self.is_rational() {
            return self.a.floor_value();
        }
        let ge = |k: &T| self.cmp_rational(k) != Ordering::Less;
        let (mut lo, mut hi);
        if ge(&T::zero()) {
            lo = T::zero();
            hi = T::one();
            while ge(&hi) {
                lo = hi.clone();
                hi = hi.clone() + hi.clone();
            }
        } else {
            hi = T::zero();
            lo = -T::one();
            while !ge(&lo) {
                hi = lo.clone();
                lo = lo.clone() + lo.clone();
            }
        }
        let two = T::one() + T::one();
        while hi.clone() - lo.clone() > T::one() {
            let mid = (lo.clone() + (hi.clone() - lo.clone()) / two.clone()).floor_value();
            if ge(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Compares `self` with a rational.
    pub fn cmp_rational(&self, k: &T) -> Ordering {
        self.sibling(self.a.clone() - k.clone(), self.b.clone())
            .signum()
    }

    /// Exact decimal expansion truncated toward negative infinity after
    /// `places` fractional digits.
    pub fn to_decimal(&self, places: usize) -> String {
        let ten = T::from_i64(10);
        let mut scale = T::one();
        for _ in 0..places {
            scale = scale * ten.clone();
        }
        let scaled = self.scale(&scale).floor();
        let negative = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let digits = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = digits.split_at(digits.len() - places);
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl<T: Scalar> PartialOrd for Quad<T> {
    /// Elements over different radicands are unordered.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_sub(other).ok().map(|diff| diff.signum())
    }
}

fn sign_of<T: Scalar>(x: &T) -> Ordering {
    x.partial_cmp(&T::zero())
        .expect("scalars are totally ordered")
}

fn check_radicand<T: Scalar>(d: &T) -> Result<()> {
    if !d.is_positive() {
        return Err(Error::NonPositiveRadicand(d.to_string()));
    }
    if d.is_square() {
        return Err(Error::RationalSquare(d.to_string()));
    }
    Ok(())
}

// Operator forms panic on mixed radicands; use the `try_*` methods when the
// operands may come from different fields.

impl<T: Scalar> Add for &Quad<T> {
    type Output = Quad<T>;
    fn add(self, rhs: Self) -> Quad<T> {
        self.try_add(rhs).expect("mixed radicands")
    }
}

impl<T: Scalar> Sub for &Quad<T> {
    type Output = Quad<T>;
    fn sub(self, rhs: Self) -> Quad<T> {
        self.try_sub(rhs).expect("mixed radicands")
    }
}

impl<T: Scalar> Mul for &Quad<T> {
    type Output = Quad<T>;
    fn mul(self, rhs: Self) -> Quad<T> {
        self.try_mul(rhs).expect("mixed radicands")
    }
}

impl<T: Scalar> Neg for &Quad<T> {
    type Output = Quad<T>;
    fn neg(self) -> Quad<T> {
        self.sibling(-self.a.clone(), -self.b.clone())
    }
}

impl<T: Scalar> Add for Quad<T> {
    type Output = Quad<T>;
    fn add(self, rhs: Self) -> Quad<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Quad<T> {
    type Output = Quad<T>;
    fn sub(self, rhs: Self) -> Quad<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Quad<T> {
    type Output = Quad<T>;
    fn mul(self, rhs: Self) -> Quad<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Quad<T> {
    type Output = Quad<T>;
    fn neg(self) -> Quad<T> {
        -&self
    }
}

/// Text form `a+b*sqrt(d)`, or `a-c*sqrt(d)` when `b = -c < 0`.
impl<T: Scalar> fmt::Display for Quad<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl<T: Scalar + FromStr> FromStr for Quad<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("expected a+b*sqrt(d), got {s:?}"));
        let open = s.rfind("*sqrt(").ok_or_else(bad)?;
        let inner = s[open + 6..].strip_suffix(')').ok_or_else(bad)?;
        let d = parse_scalar::<T>(inner)?;
        let head = &s[..open];
        // The coefficient split is the last sign that is not leading and not
        // the sign of a leading exponent-free rational.
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let (split, sign_of_b) = match head.as_bytes()[split - 1] {
            b'+' | b'-' if split >= 2 => (split - 1, &head[split..split + 1]),
            _ => (split, ""),
        };
        let a = parse_scalar::<T>(&head[..split])?;
        let op = &head[split..split + 1];
        let b_text = &head[split + 1..];
        let b_text = b_text.strip_prefix(sign_of_b).unwrap_or(b_text);
        let mut b = parse_scalar::<T>(b_text)?;
        if sign_of_b == "-" {
            b = -b;
        }
        if op == "-" {
            b = -b;
        }
        Quad::new(a, b, d)
    }
}

fn parse_scalar<T: Scalar + FromStr>(s: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}
