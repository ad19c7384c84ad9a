//! Executable stand-ins for the definable sets built from the digit
//! expansion: the offset windows `g`, the truncation map `h`, the digit
//! classes `E_i` and the periodic classes `V_{j,n}`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cfrac::CfExpansion;
use crate::error::{Error, Result};
use crate::ostrowski::{DigitKind, OstDigits};
use crate::QuadRat;

/// Window of `c - f(n sqrt(d))` for the `n >= q_l` branch of the truncation
/// map at level `l`: `[-(beta_l + beta_{l+1}), -beta_{l+1})` for even `l`,
/// the mirror image for odd `l`. The lower end is inclusive.
pub fn probe_g(cf: &CfExpansion, l: usize) -> Result<(QuadRat, QuadRat)> {
    cf.require(l + 1)?;
    let sum = cf.beta(l) + cf.beta(l + 1);
    let next = -cf.beta(l + 1);
    Ok(if l.is_multiple_of(2) {
        (-sum, next)
    } else {
        (next, -sum)
    })
}

/// Agrees with [`probe_g`] for even `l`. For odd `l` it returns
/// `(-beta_l, -(beta_l + beta_{l+1}))`, whose ends are reversed.
pub fn probe_g_printed(cf: &CfExpansion, l: usize) -> Result<(QuadRat, QuadRat)> {
    cf.require(l + 1)?;
    let sum = cf.beta(l) + cf.beta(l + 1);
    Ok(if l.is_multiple_of(2) {
        (-sum, -cf.beta(l + 1))
    } else {
        (-cf.beta(l), -sum)
    })
}

/// Window `[lo, hi)` that `c - f(n sqrt(d))` must occupy for the first
/// `l + 1` digits of `c` to read `n`. Numbers below `q_l` have a zero digit
/// at `l`, so the next digit may be as large as `a_{l+1}` and the window
/// widens to start at `-beta_l` (mirrored for odd `l`).
pub fn h_window(cf: &CfExpansion, l: usize, n: &BigInt) -> Result<(QuadRat, QuadRat)> {
    if n >= cf.q(l + 1) || n.sign() == num_bigint::Sign::Minus {
        return Err(Error::OutOfDomain(format!(
            "n = {n} outside [0, q_{})",
            l + 1
        )));
    }
    if n >= cf.q(l) {
        return probe_g(cf, l);
    }
    cf.require(l + 1)?;
    let (a, b) = (-cf.beta(l), -cf.beta(l + 1));
    Ok(if l.is_multiple_of(2) { (a, b) } else { (b, a) })
}

/// Whether `f(n sqrt(d)) + lo <= c < f(n sqrt(d)) + hi`.
pub fn in_h_window(cf: &CfExpansion, l: usize, n: &BigInt, c: &QuadRat) -> Result<bool> {
    let (lo, hi) = h_window(cf, l, n)?;
    let diff = c - &OstDigits::encode_nat(n, cf)?.f_of();
    Ok(lo <= diff && diff < hi)
}

fn check_interval(cf: &CfExpansion, c: &QuadRat) -> Result<()> {
    if c.radicand() != cf.d() {
        return Err(Error::MixedRadicand(
            c.radicand().to_string(),
            cf.d().to_string(),
        ));
    }
    if !cf.in_interval(c) {
        return Err(Error::OutOfInterval(c.to_string()));
    }
    Ok(())
}

/// The unique `n < q_{l+1}` whose representation agrees with the first
/// `l + 1` digits of `c`, checked against its window.
pub fn probe_h(cf: &CfExpansion, l: usize, c: &QuadRat) -> Result<BigInt> {
    check_interval(cf, c)?;
    let digits = OstDigits::encode_real(c, cf, l + 1)?;
    let n = digits.with_kind(DigitKind::Natural).decode_nat();
    if !in_h_window(cf, l, &n, c)? {
        return Err(Error::VerificationFailed(format!(
            "truncation {n} at level {l} misses its window for {c}"
        )));
    }
    Ok(n)
}

/// Digit `l` of `c`, read off as `(h_l(c) - h_{l-1}(c)) / q_l`.
pub fn probe_e(cf: &CfExpansion, l: usize, c: &QuadRat) -> Result<u64> {
    let upper = probe_h(cf, l, c)?;
    let lower = if l == 0 {
        BigInt::zero()
    } else {
        probe_h(cf, l - 1, c)?
    };
    let diff = upper - lower;
    let q = cf.q(l);
    if (&diff % q) != BigInt::zero() {
        return Err(Error::VerificationFailed(format!(
            "level difference {diff} is not a multiple of q_{l} = {q}"
        )));
    }
    (diff / q)
        .to_u64()
        .ok_or_else(|| Error::VerificationFailed(format!("negative digit at level {l}")))
}

/// Witness for the class of levels `l = j mod n_mod`: digit 1 at every such
/// position up to `levels`, except position 0 when `a_1 = 1` forbids it.
pub fn periodic_witness(cf: &CfExpansion, j: usize, n_mod: usize, levels: usize) -> OstDigits<'_> {
    let digits = (0..=levels)
        .map(|k| u64::from(k % n_mod == j % n_mod && cf.digit_bound(k + 1) > u64::from(k == 0)))
        .collect();
    OstDigits::new(cf, digits, DigitKind::Real)
}

/// Membership verdicts `probe_e(l, c) == 1` for `l = 0..=levels` on the
/// periodic witness.
pub fn probe_periodic_class(
    cf: &CfExpansion,
    j: usize,
    n_mod: usize,
    levels: usize,
) -> Result<Vec<bool>> {
    if n_mod < 2 || j >= n_mod {
        return Err(Error::OutOfDomain(format!(
            "need 0 <= j < n, n >= 2 (j = {j}, n = {n_mod})"
        )));
    }
    cf.require(levels + 2)?;
    let c = periodic_witness(cf, j, n_mod, levels).f_of();
    (0..=levels).map(|l| Ok(probe_e(cf, l, &c)? == 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn setup(d: i64) -> CfExpansion {
        CfExpansion::expand(&r(d, 1), 24).unwrap()
    }

    #[test]
    fn g_windows() {
        let cf = setup(3);
        let s = |a, b| cf.sqrt_d().sibling(r(a, 1), r(b, 1));
        assert_eq!(probe_g(&cf, 0).unwrap(), (s(3, -2), s(2, -1)));
        for l in 0..10 {
            let (a, b) = probe_g(&cf, l).unwrap();
            assert!(a < b);
            let (a, b) = probe_g_printed(&cf, l).unwrap();
            assert_eq!(a < b, l % 2 == 0);
        }
        let c2 = setup(2);
        let sum = c2.beta(1) + c2.beta(2);
        let printed = probe_g_printed(&c2, 1).unwrap();
        assert_eq!(printed, (-c2.beta(1), -&sum));
        assert!(printed.0 > printed.1);
        assert_eq!(probe_g(&c2, 1).unwrap(), (-c2.beta(2), -sum));
    }

    #[test]
    fn truncations_of_five() {
        let cf = setup(3);
        let c = OstDigits::encode_nat(&5.into(), &cf).unwrap().f_of();
        assert_eq!(c, cf.sqrt_d().sibling(r(-9, 1), r(5, 1)));
        assert_eq!(probe_h(&cf, 3, &c).unwrap(), BigInt::from(5));
        assert_eq!(probe_h(&cf, 1, &c).unwrap(), BigInt::from(1));
        assert_eq!(probe_e(&cf, 1, &c).unwrap(), 1);
        assert_eq!(probe_e(&cf, 2, &c).unwrap(), 0);
        let zero = cf.sqrt_d().zero_like();
        for l in 0..8 {
            assert!(probe_h(&cf, l, &zero).unwrap().is_zero());
            assert_eq!(probe_e(&cf, l, &zero).unwrap(), 0);
        }
        let outside = cf.sqrt_d().lift(r(1, 1));
        assert!(matches!(
            probe_h(&cf, 0, &outside),
            Err(Error::OutOfInterval(_))
        ));
    }

    #[test]
    fn periodic_classes() {
        let cf = setup(3);
        let v = probe_periodic_class(&cf, 1, 2, 7).unwrap();
        assert_eq!(v, (0..8).map(|l| l % 2 == 1).collect::<Vec<_>>());
        let v = probe_periodic_class(&cf, 0, 2, 7).unwrap();
        assert_eq!(v, (0..8).map(|l| l > 0 && l % 2 == 0).collect::<Vec<_>>());
        let c2 = setup(2);
        let v = probe_periodic_class(&c2, 2, 3, 11).unwrap();
        let hits: Vec<usize> = (0..12).filter(|&l| v[l]).collect();
        assert_eq!(hits, vec![2, 5, 8, 11]);
        assert!(probe_periodic_class(&c2, 0, 2, 4).unwrap()[0]);
        assert!(probe_periodic_class(&c2, 3, 3, 4).is_err());
    }
}
