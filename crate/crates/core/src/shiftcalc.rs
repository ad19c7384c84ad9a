//! Multiplication by `sqrt(d)` through digit shifts.
//!
//! A [`GenDigits`] is an eventually-zero digit function `k -> {0..=s}` with
//! no validity constraints; shifting it is plain index translation. Weighted
//! evaluations against `q_k sqrt(d)` and `beta_k`, together with the unit
//! `U = zeta_1 ... zeta_m` and the constants `v`, `w`, recover `n`, `f(n)`
//! and `sqrt(d) * x` from digit data alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::audit::{AuditEntry, Verdict};
use crate::cfrac::{tail_index_below, CfExpansion, ShiftConstants};
use crate::error::{Error, Result};
use crate::ostrowski::{DigitKind, OstDigits};
use crate::text::{format_rational, split_radicand};
use crate::{QuadRat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDigits<'cf> {
    cf: &'cf CfExpansion,
    values: BTreeMap<usize, u64>,
}

impl<'cf> GenDigits<'cf> {
    /// Builds a digit function from `(index, value)` pairs. A repeated index
    /// takes its last value; values above `s_max` are rejected.
    pub fn new(
        cf: &'cf CfExpansion,
        entries: impl IntoIterator<Item = (usize, u64)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in entries {
            if v > cf.s_max() {
                return Err(Error::DigitTooLarge {
                    value: v,
                    s_max: cf.s_max(),
                });
            }
            if v == 0 {
                values.remove(&k);
            } else {
                values.insert(k, v);
            }
        }
        Ok(Self { cf, values })
    }

    pub fn empty(cf: &'cf CfExpansion) -> Self {
        Self {
            cf,
            values: BTreeMap::new(),
        }
    }

    /// The digit function of a valid Ostrowski representation.
    pub fn embed(x: &OstDigits<'cf>) -> Result<Self> {
        x.ensure_valid()?;
        Self::new(x.cf(), x.digits().iter().copied().enumerate())
    }

    pub fn cf(&self) -> &'cf CfExpansion {
        self.cf
    }

    pub fn get(&self, k: usize) -> u64 {
        self.values.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.values.keys().next_back().copied()
    }

    /// Moves every digit `l` places up: the value at `k + l` of the result is
    /// the value at `k` of `self`.
    pub fn shift(&self, l: usize) -> Self {
        Self {
            cf: self.cf,
            values: self.values.iter().map(|(&k, &v)| (k + l, v)).collect(),
        }
    }

    /// Reads the digits back as an Ostrowski string (natural kind), without
    /// validating them.
    pub fn to_ost(&self) -> OstDigits<'cf> {
        let len = self.max_index().map_or(0, |k| k + 1);
        let mut digits = vec![0; len];
        for (k, v) in self.iter() {
            digits[k] = v;
        }
        OstDigits::new(self.cf, digits, DigitKind::Natural)
    }

    /// Per-residue sums `(sum v_k q_{k+l}, sum v_k p_{k+l})` with residues
    /// taken on the unshifted index `k mod t`.
    fn residue_sums(&self, l: usize) -> Result<Vec<(BigInt, BigInt)>> {
        let t = self.cf.t();
        if let Some(top) = self.max_index() {
            self.cf.require(top + l)?;
        }
        let mut sums = vec![(BigInt::zero(), BigInt::zero()); t];
        for (k, v) in self.iter() {
            let slot = &mut sums[k % t];
            slot.0 += self.cf.q(k + l) * v;
            slot.1 += self.cf.p(k + l) * v;
        }
        Ok(sums)
    }

    /// `sum_i u_i sum_k x_{kt+i} q_{kt+i+l} sqrt(d)`: the weighted value of
    /// the digits after a shift by `l`.
    pub fn sigma(&self, u: &Weights, l: usize) -> Result<QuadRat> {
        let (sq, _) = u.dot(&self.residue_sums(l)?);
        Ok(self.cf.sqrt_d().sibling(Rational::zero(), sq))
    }

    /// `sum_i u_i sum_k x_{kt+i} beta_{kt+i+l}`.
    pub fn f_eval(&self, u: &Weights, l: usize) -> Result<QuadRat> {
        let (sq, sp) = u.dot(&self.residue_sums(l)?);
        Ok(self.cf.sqrt_d().sibling(-sp, sq))
    }

    /// `(Sigma_u, F_u)` at every weight in `us`, sharing one pass over the digits.
    fn sigma_and_f(&self, us: &[&Weights], l: usize) -> Result<Vec<(QuadRat, QuadRat)>> {
        let sums = self.residue_sums(l)?;
        let root = self.cf.sqrt_d();
        Ok(us
            .iter()
            .map(|u| {
                let (sq, sp) = u.dot(&sums);
                (
                    root.sibling(Rational::zero(), sq.clone()),
                    root.sibling(-sp, sq),
                )
            })
            .collect())
    }

    /// Splits the digits into `t x s` cells of 0/1 digit sets: cell
    /// `(i, j)` holds the indices `k = i mod t` with `x_k >= j + 1`.
    pub fn decompose(&self) -> Decomposition {
        let t = self.cf.t();
        let s = self.cf.s_max() as usize;
        let mut cells = vec![vec![BTreeSet::new(); s]; t];
        for (k, v) in self.iter() {
            for cell in cells[k % t].iter_mut().take(v as usize) {
                cell.insert(k);
            }
        }
        Decomposition { t, s, cells }
    }

    /// Parses `k1:v1;k2:v2@d=<rational>`.
    pub fn from_text(text: &str, cf: &'cf CfExpansion) -> Result<Self> {
        let (body, d) = split_radicand(text)?;
        if let Some(d) = d {
            if &d != cf.d() {
                return Err(Error::MixedRadicand(d.to_string(), cf.d().to_string()));
            }
        }
        let mut entries = Vec::new();
        for item in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected k:v, got {item:?}")))?;
            let k = k
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
            let v = v
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad digit {v:?}")))?;
            entries.push((k, v));
        }
        Self::new(cf, entries)
    }
}

impl fmt::Display for GenDigits<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{}@d={}", body.join(";"), format_rational(self.cf.d()))
    }
}

/// The unary cell structure of a [`GenDigits`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub t: usize,
    pub s: usize,
    /// `cells[i][j]` is the support of the `(j+1)`-th unary layer of residue `i`.
    pub cells: Vec<Vec<BTreeSet<usize>>>,
}

impl Decomposition {
    /// Layers must shrink: a digit set at level `j + 1` sits inside level `j`.
    pub fn is_monotone(&self) -> bool {
        self.cells
            .iter()
            .all(|row| row.windows(2).all(|w| w[1].is_subset(&w[0])))
    }

    pub fn recompose<'cf>(&self, cf: &'cf CfExpansion) -> Result<GenDigits<'cf>> {
        let mut values: BTreeMap<usize, u64> = BTreeMap::new();
        for row in &self.cells {
            for cell in row {
                for &k in cell {
                    *values.entry(k).or_insert(0) += 1;
                }
            }
        }
        GenDigits::new(cf, values)
    }
}

/// Rational weights `u_0, ..., u_{t-1}`, one per residue class mod `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    values: Vec<Rational>,
    /// `values[i] * denom`, all integral.
    scaled: Vec<BigInt>,
    denom: BigInt,
}

impl Weights {
    pub fn new(cf: &CfExpansion, u: Vec<Rational>) -> Result<Self> {
        if u.len() != cf.t() {
            return Err(Error::OutOfDomain(format!(
                "expected {} weights, got {}",
                cf.t(),
                u.len()
            )));
        }
        Ok(Self::from_values(u))
    }

    fn from_values(values: Vec<Rational>) -> Self {
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        Self {
            values,
            scaled,
            denom,
        }
    }

    pub fn ones(cf: &CfExpansion) -> Self {
        Self::from_values(vec![Rational::one(); cf.t()])
    }

    pub fn zeros(cf: &CfExpansion) -> Self {
        Self::from_values(vec![Rational::zero(); cf.t()])
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }

    /// `(sum u_i x_i, sum u_i y_i)` over per-residue integer pairs.
    fn dot(&self, sums: &[(BigInt, BigInt)]) -> (Rational, Rational) {
        let mut x = BigInt::zero();
        let mut y = BigInt::zero();
        for (u, (sx, sy)) in self.scaled.iter().zip(sums) {
            x += u * sx;
            y += u * sy;
        }
        (
            Rational::new(x, self.denom.clone()),
            Rational::new(y, self.denom.clone()),
        )
    }
}

fn alternating(m: usize, x: QuadRat) -> QuadRat {
    if m.is_multiple_of(2) {
        x
    } else {
        -x
    }
}

fn n_of(x: &OstDigits<'_>) -> Result<u64> {
    let n = x.decode_nat();
    n.to_u64()
        .ok_or_else(|| Error::Overflow(format!("n = {n}")))
}

/// `f(n sqrt(d)) = (-1)^m U F_1(S^m R(n sqrt(d)))`: a shift by one period
/// multiplies `f` by `(-1)^m / U`.
///
/// The printed variant uses `zeta_1 ... zeta_{m+1}` in place of `U`.
pub fn check_unit_shift(x: &OstDigits<'_>) -> Result<AuditEntry> {
    let cf = x.cf();
    let m = cf.m();
    let g = GenDigits::embed(x)?;
    let shifted = g.f_eval(&Weights::ones(cf), m)?;
    let lhs = x.f_of();
    let rhs = alternating(m, cf.unit() * &shifted);
    let long = cf.sqrt_d().sibling(
        Rational::from_integer(cf.q(m - 1) + cf.a0() * cf.q(m)),
        Rational::from_integer(cf.q(m).clone()),
    );
    let printed = alternating(m, &long * &shifted);
    Ok(AuditEntry {
        lemma: "unit_shift".into(),
        n: n_of(x)?,
        printed: Verdict::from_bool(printed == lhs),
        corrected: Verdict::from_bool(rhs == lhs),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// `n = Sigma_v(S R) - F_v(S R) + Sigma_w(R) - F_w(R)`.
///
/// The printed variant is the intermediate line that pairs `w_i` with the
/// shifted index as well, i.e. evaluates `(v + w)` at shift 1.
pub fn check_recover_n(x: &OstDigits<'_>, consts: &ShiftConstants) -> Result<AuditEntry> {
    let cf = x.cf();
    let g = GenDigits::embed(x)?;
    let v = Weights::new(cf, consts.v.clone())?;
    let w = Weights::new(cf, consts.w.clone())?;
    let vw = Weights::new(
        cf,
        consts.v.iter().zip(&consts.w).map(|(a, b)| a + b).collect(),
    )?;
    let shifted = g.sigma_and_f(&[&v, &vw], 1)?;
    let (sigma_w, f_w) = g.sigma_and_f(&[&w], 0)?.remove(0);
    let rhs = &(&shifted[0].0 - &shifted[0].1) + &(&sigma_w - &f_w);
    let printed = &shifted[1].0 - &shifted[1].1;
    let lhs = cf.sqrt_d().lift(Rational::from_integer(x.decode_nat()));
    Ok(AuditEntry {
        lemma: "recover_n".into(),
        n: n_of(x)?,
        printed: Verdict::from_bool(printed == lhs),
        corrected: Verdict::from_bool(rhs == lhs),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// `sqrt(d) * f(x)` from a shift of the digits of `x`.
///
/// With `U = a sqrt(d) + b`, the period shift yields `U^{-1} f`, and
/// `sqrt(d) y = ((a^2 d - b^2) U^{-1} y + b y) / a`.
pub fn lambda_on_f(x: &OstDigits<'_>, consts: &ShiftConstants) -> Result<QuadRat> {
    let cf = x.cf();
    let m = cf.m();
    let g = GenDigits::embed(x)?;
    let inv_unit_f = alternating(m, g.f_eval(&Weights::ones(cf), m)?);
    let f = x.f_of();
    let a = Rational::from_integer(consts.a_const.clone());
    let b = Rational::from_integer(consts.b_const.clone());
    let result = &inv_unit_f.scale(&(&consts.norm / &a)) + &f.scale(&(b / a));
    if result != cf.sqrt_d() * &f {
        return Err(Error::VerificationFailed(format!(
            "shifted product {result} != sqrt(d) * {f}"
        )));
    }
    Ok(result)
}

/// `n * sqrt(d)` assembled as `P + f(n sqrt(d))` from the Ostrowski digits
/// of `n`, with the fractional part certified by the period shift.
pub fn lambda_on_n(n: &BigInt, cf: &CfExpansion) -> Result<QuadRat> {
    let x = OstDigits::encode_nat(n, cf)?;
    let (p, frac) = x.mult_nat_by_sqrt();
    let entry = check_unit_shift(&x)?;
    if !entry.corrected.holds() {
        return Err(Error::VerificationFailed(format!(
            "period shift fails for n = {n}: {} != {}",
            entry.lhs, entry.rhs
        )));
    }
    let result = &frac.f_of() + &cf.sqrt_d().lift(Rational::from_integer(p));
    if result != cf.sqrt_d().scale(&Rational::from_integer(n.clone())) {
        return Err(Error::VerificationFailed(format!(
            "{result} != {n}*sqrt(d)"
        )));
    }
    Ok(result)
}

/// Result of [`lambda_general`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaApprox {
    /// `sqrt(d) * approximant`, computed from digits.
    pub value: QuadRat,
    /// `M + f(digits)`, within `|beta_{K-1}| + |beta_K|` of the input.
    pub approximant: QuadRat,
    pub integer_part: BigInt,
    pub digits: Vec<u64>,
}

/// `sqrt(d) * x` to within `eps`, for `x >= a0 - sqrt(d)`.
///
/// Writes `x = M + c` with `c` in `I`, truncates the expansion of `c` so the
/// tail is below `eps / (a0 + 1)`, and multiplies both parts through their
/// digits. The error bound is checked exactly before returning.
pub fn lambda_general(
    x: &QuadRat,
    eps: &Rational,
    cf: &CfExpansion,
    consts: &ShiftConstants,
) -> Result<LambdaApprox> {
    if x.radicand() != cf.d() {
        return Err(Error::MixedRadicand(
            x.radicand().to_string(),
            cf.d().to_string(),
        ));
    }
    if !eps.is_positive() {
        return Err(Error::OutOfDomain(format!("eps = {eps} must be positive")));
    }
    let (lo, _) = cf.interval();
    if *x < lo {
        return Err(Error::OutOfDomain(format!("{x} is below {lo}")));
    }
    let m_part = (x - &lo).floor();
    let c = x - &x.lift(m_part.clone());
    let m_int = m_part.to_integer();

    let bound = eps / Rational::from_integer(cf.a0() + 1u32);
    let len = tail_index_below(cf, &bound).ok_or(Error::DepthExceeded {
        needed: cf.depth() + 1,
        depth: cf.depth(),
    })?;
    cf.require(len + cf.m())?;
    let real = OstDigits::encode_real(&c, cf, len)?;
    let digits = real.with_kind(DigitKind::Natural);

    let value = &lambda_on_n(&m_int, cf)? + &lambda_on_f(&digits, consts)?;
    let approximant = &x.lift(m_part) + &digits.f_of();

    let err = (&value - &(cf.sqrt_d() * x)).abs();
    if err.cmp_rational(eps).is_ge() {
        return Err(Error::VerificationFailed(format!(
            "|{value} - sqrt(d)*x| is not below {eps}"
        )));
    }
    Ok(LambdaApprox {
        value,
        approximant,
        integer_part: m_int,
        digits: digits.digits().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn setup(d: Rational) -> CfExpansion {
        CfExpansion::expand(&d, 24).unwrap()
    }

    #[test]
    fn embed_and_shift() {
        let cf = setup(r(3, 1));
        let five = OstDigits::encode_nat(&5.into(), &cf).unwrap();
        let g = GenDigits::embed(&five).unwrap();
        assert_eq!(g.iter().collect::<Vec<_>>(), vec![(1, 1), (3, 1)]);
        assert_eq!(g.shift(2).iter().collect::<Vec<_>>(), vec![(3, 1), (5, 1)]);
        assert_eq!(g.shift(1).shift(1), g.shift(2));
        assert!(GenDigits::empty(&cf).shift(7).is_empty());
        assert_eq!(g.to_string(), "1:1;3:1@d=3");
        assert_eq!(GenDigits::from_text("1:1;3:1@d=3", &cf).unwrap(), g);

        let c2 = setup(r(2, 1));
        let four = OstDigits::encode_nat(&4.into(), &c2).unwrap();
        assert_eq!(
            GenDigits::embed(&four).unwrap().iter().collect::<Vec<_>>(),
            vec![(1, 2)]
        );

        let bad = OstDigits::new(&cf, vec![1], DigitKind::Natural);
        assert!(matches!(
            GenDigits::embed(&bad),
            Err(Error::InvalidDigits { index: 0 })
        ));
        assert!(GenDigits::new(&cf, [(0, 3)]).is_err());
    }

    #[test]
    fn weighted_evaluations_sqrt3() {
        let cf = setup(r(3, 1));
        let five = OstDigits::encode_nat(&5.into(), &cf).unwrap();
        let g = GenDigits::embed(&five).unwrap();
        let v = Weights::new(&cf, vec![r(2, 3), r(1, 3)]).unwrap();
        let w = Weights::new(&cf, vec![r(-1, 3), r(-1, 3)]).unwrap();
        let q = |a: Rational, b: Rational| cf.sqrt_d().sibling(a, b);
        assert_eq!(g.sigma(&w, 0).unwrap(), q(r(0, 1), r(-5, 3)));
        assert_eq!(g.sigma(&v, 1).unwrap(), q(r(0, 1), r(14, 3)));
        assert!(g.sigma(&Weights::zeros(&cf), 3).unwrap().is_zero());
        assert_eq!(
            g.f_eval(&Weights::ones(&cf), 2).unwrap(),
            q(r(-33, 1), r(19, 1))
        );
        assert_eq!(g.f_eval(&v, 1).unwrap(), q(r(-8, 1), r(14, 3)));
        assert!(Weights::new(&cf, vec![r(1, 1)]).is_err());
    }

    #[test]
    fn identities_for_five_over_sqrt3() {
        let cf = setup(r(3, 1));
        let consts = cf.derive_shift_constants().unwrap();
        let five = OstDigits::encode_nat(&5.into(), &cf).unwrap();
        let e = check_unit_shift(&five).unwrap();
        assert!(e.corrected.holds());
        assert!(!e.printed.holds());
        assert_eq!(e.lhs, "-9+5*sqrt(3)");
        let e = check_recover_n(&five, &consts).unwrap();
        assert!(e.corrected.holds());
        assert_eq!(e.rhs, "5+0*sqrt(3)");

        let zero = OstDigits::encode_nat(&0.into(), &cf).unwrap();
        assert!(check_unit_shift(&zero).unwrap().corrected.holds());
        assert!(check_unit_shift(&zero).unwrap().printed.holds());
        assert!(check_recover_n(&zero, &consts).unwrap().corrected.holds());
    }

    #[test]
    fn lambda_pieces() {
        let cf = setup(r(3, 1));
        let consts = cf.derive_shift_constants().unwrap();
        let five = OstDigits::encode_nat(&5.into(), &cf).unwrap();
        assert_eq!(
            lambda_on_f(&five, &consts).unwrap(),
            cf.sqrt_d().sibling(r(15, 1), r(-9, 1))
        );
        assert!(
            lambda_on_f(&OstDigits::new(&cf, vec![], DigitKind::Natural), &consts)
                .unwrap()
                .is_zero()
        );
        assert_eq!(
            lambda_on_n(&5.into(), &cf).unwrap(),
            cf.sqrt_d().scale(&r(5, 1))
        );
        assert!(lambda_on_n(&0.into(), &cf).unwrap().is_zero());

        let c2 = setup(r(2, 1));
        let k2 = c2.derive_shift_constants().unwrap();
        let four = OstDigits::encode_nat(&4.into(), &c2).unwrap();
        assert_eq!(
            lambda_on_f(&four, &k2).unwrap(),
            c2.sqrt_d().sibling(r(8, 1), r(-6, 1))
        );

        let c = setup(r(32, 9));
        assert_eq!(
            lambda_on_n(&7.into(), &c).unwrap(),
            c.sqrt_d().scale(&r(7, 1))
        );
    }

    #[test]
    fn lambda_general_cases() {
        let cf = CfExpansion::expand(&r(3, 1), 64).unwrap();
        let consts = cf.derive_shift_constants().unwrap();
        let eps = r(1, 1_000_000_000);
        let zero = cf.sqrt_d().zero_like();
        assert!(lambda_general(&zero, &eps, &cf, &consts)
            .unwrap()
            .value
            .is_zero());

        let x = cf.sqrt_d().sibling(r(-9, 1), r(5, 1));
        let res = lambda_general(&x, &r(1, 2), &cf, &consts).unwrap();
        assert_eq!(res.value, cf.sqrt_d().sibling(r(15, 1), r(-9, 1)));
        assert_eq!(res.approximant, x);

        let x = cf.sqrt_d().lift(r(7, 5));
        let res = lambda_general(&x, &eps, &cf, &consts).unwrap();
        let err = (&res.value - &(cf.sqrt_d() * &x)).abs();
        assert!(err.cmp_rational(&eps).is_lt());

        let below = cf.sqrt_d().lift(r(-1, 1));
        assert!(matches!(
            lambda_general(&below, &eps, &cf, &consts),
            Err(Error::OutOfDomain(_))
        ));
        let shallow = CfExpansion::expand(&r(3, 1), 10).unwrap();
        assert!(matches!(
            lambda_general(&x, &eps, &shallow, &consts),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn decomposition_cells() {
        let cf = setup(r(3, 1));
        let g = GenDigits::new(&cf, [(1, 1), (3, 1)]).unwrap();
        let dec = g.decompose();
        assert_eq!((dec.t, dec.s), (2, 2));
        assert_eq!(dec.cells[1][0], BTreeSet::from([1, 3]));
        assert!(dec.cells[0].iter().all(BTreeSet::is_empty));
        assert!(dec.cells[1][1].is_empty());
        assert!(dec.is_monotone());
        assert_eq!(dec.recompose(&cf).unwrap(), g);
        assert!(GenDigits::empty(&cf)
            .decompose()
            .cells
            .iter()
            .flatten()
            .all(BTreeSet::is_empty));
    }
}
