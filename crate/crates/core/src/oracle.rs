//! Brute-force reference computations used to cross-check the digit
//! algorithms. None of these touch the greedy encoders.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cfrac::CfExpansion;
use crate::error::{Error, Result};
use crate::ostrowski::first_violation;
use crate::probes::{h_window, probe_g, probe_g_printed};
use crate::{QuadRat, Rational};

/// `f(n sqrt(d))` for `n < limit`, taken as the unique translate of
/// `n sqrt(d)` by an integer that lands in the base interval.
///
/// With `a0 - sqrt(d)` as the left end of the interval, the translate is
/// `floor((n + 1) sqrt(d)) - a0`, and that floor is an integer square root.
pub struct FTable<'cf> {
    cf: &'cf CfExpansion,
    /// `m_n` with `f(n sqrt(d)) = n sqrt(d) - m_n`.
    shifts: Vec<BigInt>,
}

impl<'cf> FTable<'cf> {
    pub fn new(cf: &'cf CfExpansion, limit: usize) -> Self {
        let d = cf.d();
        let shifts = (0..limit)
            .map(|n| {
                let k = BigInt::from(n + 1);
                let scaled = (d * Rational::from_integer(&k * &k)).floor().to_integer();
                scaled.sqrt() - cf.a0()
            })
            .collect();
        Self { cf, shifts }
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn get(&self, n: usize) -> QuadRat {
        self.cf.sqrt_d().sibling(
            Rational::from_integer(-&self.shifts[n]),
            Rational::from_integer(n.into()),
        )
    }

    /// Every `n < q_{l+1}` whose window contains `c`.
    pub fn h_candidates(&self, l: usize, c: &QuadRat) -> Result<Vec<usize>> {
        let below = self.cf.q(l).try_into().unwrap_or(usize::MAX);
        let wide = h_window(self.cf, l, &BigInt::zero())?;
        let narrow = probe_g(self.cf, l)?;
        self.candidates_within(l, c, below, &wide, &narrow)
    }

    /// Same search with the single offset window `g` for every `n`, as in
    /// the original definition of the truncation map.
    pub fn printed_h_candidates(&self, l: usize, c: &QuadRat) -> Result<Vec<usize>> {
        let g = probe_g_printed(self.cf, l)?;
        self.candidates_within(l, c, 0, &g, &g)
    }

    /// Candidates using `wide` below `below` and `narrow` from there on.
    fn candidates_within(
        &self,
        l: usize,
        c: &QuadRat,
        below: usize,
        wide: &(QuadRat, QuadRat),
        narrow: &(QuadRat, QuadRat),
    ) -> Result<Vec<usize>> {
        let top = self.cf.q(l + 1);
        let limit: usize = top
            .try_into()
            .map_err(|_| Error::Overflow(format!("q_{} = {top}", l + 1)))?;
        if limit > self.shifts.len() {
            return Err(Error::DepthExceeded {
                needed: limit,
                depth: self.shifts.len(),
            });
        }
        let fast = Lattice::new(self.cf, c);
        let mut hits = Vec::new();
        for n in 0..limit {
            let (lo, hi) = if n < below { wide } else { narrow };
            let inside = match fast
                .as_ref()
                .and_then(|f| f.contains(lo, hi, n, &self.shifts[n]))
            {
                Some(v) => v,
                None => {
                    let diff = c - &self.get(n);
                    lo <= &diff && &diff < hi
                }
            };
            if inside {
                hits.push(n);
            }
        }
        Ok(hits)
    }

    /// The truncation map by exhaustive search; errors unless exactly one
    /// `n` qualifies.
    pub fn brute_force_h(&self, l: usize, c: &QuadRat) -> Result<BigInt> {
        match self.h_candidates(l, c)?.as_slice() {
            [n] => Ok(BigInt::from(*n)),
            hits => Err(Error::VerificationFailed(format!(
                "{} candidates for h at level {l}: {hits:?}",
                hits.len()
            ))),
        }
    }
}

/// Elements `(x + y sqrt(e)) / scale` with `e = num(d) den(d)`, in `i128`.
/// Every operation is checked; `None` means "fall back to exact rationals".
struct Lattice {
    e: i128,
    /// `scale / den(d)`: converts an irrational coefficient to `y`.
    per_root: i128,
    scale: i128,
    c: (i128, i128),
}

impl Lattice {
    fn new(cf: &CfExpansion, c: &QuadRat) -> Option<Self> {
        let dn = cf.d().denom().to_i128()?;
        let e = cf.d().numer().to_i128()?.checked_mul(dn)?;
        let ca = c.rational_part();
        let cb = c.irrational_part() / Rational::from_integer(cf.d().denom().clone());
        let scale = ca.denom().lcm(cb.denom()).lcm(cf.d().denom());
        let scale_i = scale.to_i128()?;
        let cx = (ca * Rational::from_integer(scale.clone()))
            .to_integer()
            .to_i128()?;
        let cy = (cb * Rational::from_integer(scale))
            .to_integer()
            .to_i128()?;
        Some(Self {
            e,
            per_root: scale_i / dn,
            scale: scale_i,
            c: (cx, cy),
        })
    }

    fn embed(&self, q: &QuadRat) -> Option<(i128, i128)> {
        let a = q.rational_part();
        let b = q.irrational_part();
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        let x = a.to_integer().to_i128()?.checked_mul(self.scale)?;
        let y = b.to_integer().to_i128()?.checked_mul(self.per_root)?;
        Some((x, y))
    }

    fn sign(&self, x: i128, y: i128) -> Option<Ordering> {
        let (sx, sy) = (x.cmp(&0), y.cmp(&0));
        if sy == Ordering::Equal || sx == sy {
            return Some(sx);
        }
        if sx == Ordering::Equal {
            return Some(sy);
        }
        let x2 = x.checked_mul(x)?;
        let ey2 = y.checked_mul(y)?.checked_mul(self.e)?;
        Some(if x2 > ey2 { sx } else { sy })
    }

    /// Whether `lo <= c - (n sqrt(d) - shift) < hi`.
    fn contains(&self, lo: &QuadRat, hi: &QuadRat, n: usize, shift: &BigInt) -> Option<bool> {
        let fx = shift.to_i128()?.checked_mul(self.scale)?;
        let fy = i128::try_from(n).ok()?.checked_mul(self.per_root)?;
        let dx = self.c.0.checked_add(fx)?;
        let dy = self.c.1.checked_sub(fy)?;
        let (lx, ly) = self.embed(lo)?;
        let (hx, hy) = self.embed(hi)?;
        let above = self.sign(dx.checked_sub(lx)?, dy.checked_sub(ly)?)?;
        let below = self.sign(dx.checked_sub(hx)?, dy.checked_sub(hy)?)?;
        Some(above != Ordering::Less && below == Ordering::Less)
    }
}

/// All valid digit strings of exactly `len` positions (trailing zeros
/// included), in lexicographic order.
pub fn enumerate_valid(cf: &CfExpansion, len: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; len];
    fill(cf, &mut cur, 0, &mut out);
    out
}

fn fill(cf: &CfExpansion, cur: &mut Vec<u64>, k: usize, out: &mut Vec<Vec<u64>>) {
    if k == cur.len() {
        if first_violation(cf, cur).is_none() {
            out.push(cur.clone());
        }
        return;
    }
    for v in 0..=cf.digit_bound(k + 1) {
        cur[k] = v;
        if first_violation(cf, &cur[..=k]).is_none() {
            fill(cf, cur, k + 1, out);
        }
    }
    cur[k] = 0;
}

/// `sum b_k q_k` computed without the decoder.
pub fn value_of(cf: &CfExpansion, digits: &[u64]) -> BigInt {
    digits
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (k, &b)| acc + cf.q(k) * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_worked_value() {
        let cf = CfExpansion::expand(&Rational::from_integer(3.into()), 16).unwrap();
        let t = FTable::new(&cf, 20);
        assert_eq!(
            t.get(5),
            cf.sqrt_d().sibling(
                Rational::from_integer((-9).into()),
                Rational::from_integer(5.into())
            )
        );
        assert!(t.get(0).is_zero());
        let c = t.get(5);
        assert_eq!(t.brute_force_h(3, &c).unwrap(), BigInt::from(5));
    }

    #[test]
    fn word_sized_windows_agree_with_exact_ones() {
        let cf = CfExpansion::expand(&Rational::new(32.into(), 9.into()), 16).unwrap();
        let t = FTable::new(&cf, 200);
        let (lo, _) = cf.interval();
        for k in 0..40 {
            let c = &lo + &lo.lift(Rational::new((k * 97).into(), 4000.into()));
            let fast = Lattice::new(&cf, &c).unwrap();
            for l in 0..4 {
                for n in 0..cf.q(l + 1).to_usize().unwrap() {
                    let (a, b) = h_window(&cf, l, &BigInt::from(n)).unwrap();
                    let diff = &c - &t.get(n);
                    let exact = a <= diff && diff < b;
                    assert_eq!(fast.contains(&a, &b, n, &t.shifts[n]), Some(exact));
                }
            }
        }
    }

    #[test]
    fn enumeration_covers_an_initial_segment() {
        let cf = CfExpansion::expand(&Rational::from_integer(3.into()), 16).unwrap();
        let all = enumerate_valid(&cf, 4);
        let mut values: Vec<BigInt> = all.iter().map(|s| value_of(&cf, s)).collect();
        values.sort();
        let expect: Vec<BigInt> = (0..11).map(BigInt::from).collect();
        assert_eq!(values, expect);
    }
}
