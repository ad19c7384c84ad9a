#![allow(dead_code)]

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use ostro_core::{CfExpansion, QuadRat, Rational};

pub const SUITE: &[(i64, i64)] = &[
    (2, 1),
    (3, 1),
    (5, 1),
    (6, 1),
    (7, 1),
    (8, 1),
    (10, 1),
    (11, 1),
    (12, 1),
    (13, 1),
    (14, 1),
    (15, 1),
    (19, 1),
    (31, 1),
    (61, 1),
    (3, 2),
    (5, 3),
    (7, 2),
    (32, 9),
    (7, 3),
    (13, 5),
];

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn expansion(d: (i64, i64), depth: usize) -> CfExpansion {
    CfExpansion::expand(&r(d.0, d.1), depth).unwrap()
}

/// `floor(x * 10^places)` for `x = a + b sqrt(d)`, computed with integer
/// square roots only, together with a bound on its error (in units of
/// `10^-places`).
pub fn fixed_point(x: &QuadRat, places: u32) -> (BigInt, BigInt) {
    let d = x.radicand();
    let scale = BigInt::from(10u32).pow(places);
    let (dn, dd) = (d.numer().clone(), d.denom().clone());
    // sqrt(dn/dd) = sqrt(dn*dd)/dd
    let root = (&dn * &dd * &scale * &scale).sqrt();
    let sqrt_scaled = Rational::new(root, dd);
    let a = x.rational_part() * Rational::from_integer(scale.clone());
    let b = x.irrational_part();
    let approx = a + b * sqrt_scaled;
    let err = b.abs().ceil().to_integer() + 2;
    (approx.floor().to_integer(), err)
}

/// Sign of `x` decided numerically at 100 places; `None` when too close to
/// call.
pub fn numeric_sign(x: &QuadRat) -> Option<Sign> {
    if x.rational_part().is_zero() && x.irrational_part().is_zero() {
        return Some(Sign::NoSign);
    }
    let (v, err) = fixed_point(x, 100);
    if v > err {
        Some(Sign::Plus)
    } else if v < -err {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// Partial quotients of `sqrt(p/q)` by the classical integer recurrence on
/// `(P + sqrt(D)) / Q` with `D = p q`, together with the period length.
pub fn classical_cf(p: i64, q: i64, terms: usize) -> (Vec<i64>, usize) {
    let d = p * q;
    let s = (d as f64).sqrt() as i64;
    let s = (s - 2..=s + 2).filter(|x| x * x <= d).max().unwrap();
    let (mut pp, mut qq) = (0i64, q);
    let mut out = Vec::new();
    let mut states = Vec::new();
    let mut period = 0;
    for k in 0..terms {
        let a = (pp + s).div_euclid(qq);
        out.push(a);
        if period == 0 && k >= 2 && (pp, qq) == states[1] {
            period = k - 1;
        }
        states.push((pp, qq));
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
    (out, period)
}

/// Convergent numerators and denominators from partial quotients.
pub fn convergents(a: &[i64]) -> (Vec<BigInt>, Vec<BigInt>) {
    let (mut p, mut q) = (vec![], vec![]);
    let (mut p1, mut p2) = (BigInt::from(1), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::from(1));
    for &ak in a {
        let pn = &p1 * ak + &p2;
        let qn = &q1 * ak + &q2;
        p.push(pn.clone());
        q.push(qn.clone());
        p2 = std::mem::replace(&mut p1, pn);
        q2 = std::mem::replace(&mut q1, qn);
    }
    (p, q)
}
