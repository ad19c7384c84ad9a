//! Exact scalar types usable as coefficients of [`Quad`](crate::qfield::Quad).

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact ordered field.
///
/// Every comparison made on quadratic numbers reduces to comparisons and
/// square tests on the coefficients, so inexact types (floats) are not
/// admissible here.
pub trait Scalar: Clone + Debug + Display + Ord + Num + Signed + Send + Sync + 'static {
    /// `true` when `self = c * c` for some `c` of the same type.
    fn is_square(&self) -> bool;

    /// The largest integral value that does not exceed `self`.
    fn floor_value(&self) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Compares `self^2` with `d * other^2`.
    fn cmp_square(&self, other: &Self, d: &Self) -> Ordering {
        (self.clone() * self.clone()).cmp(&(d.clone() * other.clone() * other.clone()))
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Integer + Signed + Roots + Clone + Debug + Display + From<i64> + Send + Sync + 'static,
{
    fn is_square(&self) -> bool {
        // numer and denom are coprime, so the quotient is a square iff both are.
        let (n, d) = (self.numer(), self.denom());
        if n.is_negative() {
            return false;
        }
        if n.is_zero() {
            return true;
        }
        is_square_int(n) && is_square_int(d)
    }

    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from(v))
    }

    // Cross-multiplied so no intermediate ratio is reduced.
    fn cmp_square(&self, other: &Self, d: &Self) -> Ordering {
        let (an, ad) = (self.numer(), self.denom());
        let (bn, bd) = (other.numer(), other.denom());
        let lhs = an.clone() * an.clone() * bd.clone() * bd.clone() * d.denom().clone();
        let rhs = bn.clone() * bn.clone() * ad.clone() * ad.clone() * d.numer().clone();
        lhs.cmp(&rhs)
    }
}

fn is_square_int<I: Integer + Roots + Clone>(n: &I) -> bool {
    let r = n.sqrt();
    r.clone() * r == *n
}
