//! Continued-fraction expansion of `sqrt(d)` for rational, non-square `d`.
//!
//! The expansion is `[a0; a1, ..., am]` repeated from index 1, with
//! convergents `p_k/q_k` (seeded by `p_{-1} = 1`, `q_{-1} = 0`), differences
//! `beta_k = q_k*sqrt(d) - p_k` and complete quotients `zeta_k`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::audit::{FactCheck, FactRecord};
use crate::error::{Error, Result};
use crate::{QuadRat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    d: Rational,
    sqrt_d: QuadRat,
    a0: BigInt,
    period: Vec<u64>,
    s_max: u64,
    // Offset by one: index 0 holds p_{-1} / q_{-1}.
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    betas: Vec<QuadRat>,
    // zeta_0 ..= zeta_m
    zetas: Vec<QuadRat>,
    unit: QuadRat,
    depth: usize,
}

impl CfExpansion {
    /// Expands `sqrt(d)` and materializes convergents and differences for
    /// `k = 0..=depth`.
    ///
    /// The period is found by iterating `zeta_{k+1} = 1/(zeta_k - a_k)` until
    /// `zeta_1` reappears, which gives the minimal period directly.
    pub fn expand(d: &Rational, depth: usize) -> Result<Self> {
        let sqrt_d = QuadRat::sqrt(d.clone())?;
        let a0 = sqrt_d.floor();
        let zeta1 = (&sqrt_d - &sqrt_d.lift(a0.clone())).inv()?;
        let mut zetas = vec![sqrt_d.clone(), zeta1.clone()];
        let mut partials = Vec::new();
        loop {
            let z = zetas.last().expect("non-empty");
            let a = z.floor();
            let next = (z - &z.lift(a.clone())).inv()?;
            partials.push(a);
            if next == zeta1 {
                break;
            }
            zetas.push(next);
        }
        let period = partials
            .iter()
            .map(|a| {
                a.to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::Overflow(format!("partial quotient {a}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let a0 = a0.to_integer();
        let s_max = *period.iter().max().expect("period is never empty");

        let m = period.len();
        let shape_ok = BigInt::from(period[m - 1]) == &a0 * 2u32
            && (0..m - 1).all(|i| period[i] == period[m - 2 - i]);
        if !shape_ok {
            return Err(Error::VerificationFailed(format!(
                "period {period:?} of sqrt({d}) is not a palindrome closed by 2*a0"
            )));
        }

        let unit = zetas[1..].iter().fold(sqrt_d.one_like(), |acc, z| &acc * z);

        let mut cf = CfExpansion {
            d: d.clone(),
            sqrt_d,
            a0,
            period,
            s_max,
            p: Vec::new(),
            q: Vec::new(),
            betas: Vec::new(),
            zetas,
            unit,
            depth: 0,
        };
        cf.materialize(depth);
        Ok(cf)
    }

    /// Re-expands with a different depth, reusing the detected period.
    pub fn with_depth(&self, depth: usize) -> Self {
        let mut cf = self.clone();
        cf.materialize(depth);
        cf
    }

    fn materialize(&mut self, depth: usize) {
        let mut p = vec![BigInt::one(), self.a0.clone()];
        let mut q = vec![BigInt::zero(), BigInt::one()];
        for k in 1..=depth {
            let a = BigInt::from(self.digit_bound(k));
            let pk = &a * &p[k] + &p[k - 1];
            let qk = &a * &q[k] + &q[k - 1];
            p.push(pk);
            q.push(qk);
        }
        self.betas = (0..=depth)
            .map(|k| {
                self.sqrt_d.sibling(
                    -Rational::from_integer(p[k + 1].clone()),
                    Rational::from_integer(q[k + 1].clone()),
                )
            })
            .collect();
        self.p = p;
        self.q = q;
        self.depth = depth;
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn sqrt_d(&self) -> &QuadRat {
        &self.sqrt_d
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    /// `a_1, ..., a_m`.
    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn m(&self) -> usize {
        self.period.len()
    }

    /// Largest partial quotient of the period, the digit alphabet bound.
    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `t = max(m, 2)`, the residue count used by the shift machinery.
    pub fn t(&self) -> usize {
        self.m().max(2)
    }

    /// `a_k` for `k >= 1`.
    pub fn digit_bound(&self, k: usize) -> u64 {
        assert!(k >= 1, "a_0 is not a digit bound");
        self.period[(k - 1) % self.period.len()]
    }

    pub fn partial_quotient(&self, k: usize) -> BigInt {
        if k == 0 {
            self.a0.clone()
        } else {
            BigInt::from(self.digit_bound(k))
        }
    }

    /// Fails with `DepthExceeded` unless index `k` is materialized.
    pub fn require(&self, k: usize) -> Result<()> {
        if k > self.depth {
            Err(Error::DepthExceeded {
                needed: k,
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.p[k + 1]
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.q[k + 1]
    }

    /// `p_i` for `i >= -1`.
    fn p_at(&self, i: isize) -> &BigInt {
        &self.p[(i + 1) as usize]
    }

    fn q_at(&self, i: isize) -> &BigInt {
        &self.q[(i + 1) as usize]
    }

    pub fn beta(&self, k: usize) -> &QuadRat {
        &self.betas[k]
    }

    pub fn betas(&self) -> &[QuadRat] {
        &self.betas
    }

    pub fn complete_quotient(&self, k: usize) -> &QuadRat {
        if k == 0 {
            &self.zetas[0]
        } else {
            &self.zetas[(k - 1) % self.m() + 1]
        }
    }

    /// `U = zeta_1 * ... * zeta_m`, the unit whose action shifts differences
    /// by one period: `U * beta_{k+m} = (-1)^m * beta_k`.
    pub fn unit(&self) -> &QuadRat {
        &self.unit
    }

    /// Bounds of `I = [a0 - sqrt(d), a0 + 1 - sqrt(d))`, the range of real
    /// Ostrowski expansions.
    pub fn interval(&self) -> (QuadRat, QuadRat) {
        let lo = &self.sqrt_d.lift(Rational::from_integer(self.a0.clone())) - &self.sqrt_d;
        let hi = &lo + &lo.one_like();
        (lo, hi)
    }

    pub fn in_interval(&self, c: &QuadRat) -> bool {
        let (lo, hi) = self.interval();
        c.radicand() == self.d() && *c >= lo && *c < hi
    }

    fn rat(&self, v: &BigInt) -> QuadRat {
        self.sqrt_d.lift(Rational::from_integer(v.clone()))
    }

    /// Checks the continued-fraction identities over all materialized
    /// indices, in both their printed and corrected index forms.
    ///
    /// Requires `depth >= 3m + 3`.
    pub fn audit_identities(&self) -> Result<Vec<FactRecord>> {
        let m = self.m();
        self.require(3 * m + 3)?;
        let depth = self.depth;
        let mi = m as isize;
        let a0 = &self.a0;
        let d = &self.d;
        let mut out = Vec::new();

        let mut rec = FactCheck::new("recurrence");
        for k in 0..depth {
            let a = self.partial_quotient(k + 1);
            let ki = k as isize;
            let q_rhs = &a * self.q_at(ki) + self.q_at(ki - 1);
            let p_rhs = &a * self.p_at(ki) + self.p_at(ki - 1);
            rec.both(k as i64 + 1, self.q(k + 1), &q_rhs, *self.q(k + 1) == q_rhs);
            rec.both(k as i64 + 1, self.p(k + 1), &p_rhs, *self.p(k + 1) == p_rhs);
        }
        out.push(rec.finish());

        let mut rec = FactCheck::new("determinant");
        for k in 0..=depth {
            let ki = k as isize;
            let lhs = self.p_at(ki) * self.q_at(ki - 1) - self.p_at(ki - 1) * self.q_at(ki);
            let rhs = if k % 2 == 0 {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            rec.both(k as i64, &lhs, &rhs, lhs == rhs);
        }
        out.push(rec.finish());

        let mut rec = FactCheck::new("sqrt_shape");
        let last_ok = BigInt::from(self.period[m - 1]) == a0 * 2u32;
        let palindrome = (0..m - 1).all(|i| self.period[i] == self.period[m - 2 - i]);
        rec.both(
            m as i64,
            format!("{:?}", self.period),
            format!("palindrome closed by {}", a0 * 2u32),
            last_ok && palindrome,
        );
        out.push(rec.finish());

        let mut rec = FactCheck::new("beta_alternation");
        for k in 0..depth {
            let sign_ok = self.beta(k).is_positive() == (k % 2 == 0);
            let shrink = self.beta(k + 1).abs() < self.beta(k).abs();
            rec.both(k as i64, self.beta(k), self.beta(k + 1), sign_ok && shrink);
        }
        out.push(rec.finish());

        // beta_{k+1} = -beta_k / zeta_{k+2}; the printed form starts at k = 1.
        let mut rec = FactCheck::new("beta_ratio");
        for k in 0..depth {
            let rhs = (-self.beta(k)).try_div(self.complete_quotient(k + 2))?;
            let ok = *self.beta(k + 1) == rhs;
            if k >= 1 {
                rec.printed(k as i64, self.beta(k + 1), &rhs, ok);
            }
            rec.corrected(k as i64, self.beta(k + 1), &rhs, ok);
        }
        out.push(rec.finish());

        // Printed: zeta_{lm+1} = sqrt(d) + a0 for l >= 0.
        // Corrected: zeta_{lm} = sqrt(d) + a0 for l >= 1.
        let mut rec = FactCheck::new("zeta_period");
        let target = &self.sqrt_d + &self.rat(a0);
        for l in 0..=depth / m {
            if l * m < depth {
                let z = self.complete_quotient(l * m + 1);
                rec.printed(l as i64, z, &target, *z == target);
            }
            if l >= 1 {
                let z = self.complete_quotient(l * m);
                rec.corrected(l as i64, z, &target, *z == target);
            }
        }
        out.push(rec.finish());

        // Printed: p_{km} = a0 q_{km} + q_{km-1}, d q_{km} = a0 p_{km} + p_{km-1}.
        // Corrected: the same with km replaced by km - 1.
        let mut rec = FactCheck::new("pq_link");
        let dq = |i: isize| d * Rational::from_integer(self.q_at(i).clone());
        let lin = |x: &BigInt, y: &BigInt| Rational::from_integer(a0 * x + y);
        for k in 1..=depth / m {
            let n = k as isize * mi;
            let kk = k as i64;
            let rhs = a0 * self.q_at(n) + self.q_at(n - 1);
            rec.printed(kk, self.p_at(n), &rhs, *self.p_at(n) == rhs);
            let (lhs, rhs) = (dq(n), lin(self.p_at(n), self.p_at(n - 1)));
            rec.printed(kk, &lhs, &rhs, lhs == rhs);

            let n = n - 1;
            let rhs = a0 * self.q_at(n) + self.q_at(n - 1);
            rec.corrected(kk, self.p_at(n), &rhs, *self.p_at(n) == rhs);
            let (lhs, rhs) = (dq(n), lin(self.p_at(n), self.p_at(n - 1)));
            rec.corrected(kk, &lhs, &rhs, lhs == rhs);
        }
        out.push(rec.finish());

        // Printed: zeta_1...zeta_{m+1} = q_m sqrt(d) + q_{m-1} + a0 q_m.
        // Corrected: zeta_1...zeta_m = q_{m-1} sqrt(d) + p_{m-1}.
        let mut rec = FactCheck::new("zeta_product");
        let long_product = &self.unit * self.complete_quotient(m + 1);
        let printed_rhs = self.sqrt_d.sibling(
            Rational::from_integer(self.q(m - 1) + a0 * self.q(m)),
            Rational::from_integer(self.q(m).clone()),
        );
        rec.printed(
            m as i64,
            &long_product,
            &printed_rhs,
            long_product == printed_rhs,
        );
        let corrected_rhs = self.sqrt_d.sibling(
            Rational::from_integer(self.p(m - 1).clone()),
            Rational::from_integer(self.q(m - 1).clone()),
        );
        rec.corrected(
            m as i64,
            &self.unit,
            &corrected_rhs,
            self.unit == corrected_rhs,
        );
        out.push(rec.finish());

        // U beta_{k+m} = (-1)^m beta_k, with U the product over one period;
        // the printed form multiplies by one complete quotient more.
        let mut rec = FactCheck::new("beta_shift");
        for k in 0..=depth - m {
            let rhs = if m.is_multiple_of(2) {
                self.beta(k).clone()
            } else {
                -self.beta(k)
            };
            let printed = &long_product * self.beta(k + m);
            rec.printed(k as i64, &printed, &rhs, printed == rhs);
            let corrected = &self.unit * self.beta(k + m);
            rec.corrected(k as i64, &corrected, &rhs, corrected == rhs);
        }
        out.push(rec.finish());

        Ok(out)
    }

    /// Solves for the rational vectors `v`, `w` of length `t` with
    /// `q_{kt+i} = v_i p_{kt+i+1} + w_i p_{kt+i}` for every `k`, using the
    /// data points `k = 0, 1` and verifying all other materialized `k`.
    pub fn derive_shift_constants(&self) -> Result<ShiftConstants> {
        let t = self.t();
        self.require(2 * t + 2)?;
        let big = |x: &BigInt| Rational::from_integer(x.clone());
        let mut v = Vec::with_capacity(t);
        let mut w = Vec::with_capacity(t);
        for i in 0..t {
            let (p0, p1, q0) = (self.p(i), self.p(i + 1), self.q(i));
            let (p2, p3, q2) = (self.p(t + i), self.p(t + i + 1), self.q(t + i));
            let det = p1 * p2 - p0 * p3;
            if det.is_zero() {
                return Err(Error::SingularSystem {
                    d: self.d.to_string(),
                    residue: i,
                });
            }
            let det = big(&det);
            let vi = big(&(q0 * p2 - p0 * q2)) / &det;
            let wi = big(&(p1 * q2 - q0 * p3)) / &det;
            let mut k = 0;
            while k * t + i < self.depth {
                let n = k * t + i;
                if big(self.q(n)) != &vi * big(self.p(n + 1)) + &wi * big(self.p(n)) {
                    return Err(Error::VerificationFailed(format!(
                        "q_{n} != v_{i} p_{} + w_{i} p_{n} for d = {}",
                        n + 1,
                        self.d
                    )));
                }
                k += 1;
            }
            v.push(vi);
            w.push(wi);
        }

        let m = self.m();
        let a_const = self.q(m - 1).clone();
        let b_const = self.p(m - 1).clone();
        let expected = self.sqrt_d.sibling(big(&b_const), big(&a_const));
        if self.unit != expected {
            return Err(Error::VerificationFailed(format!(
                "unit {} != {}",
                self.unit, expected
            )));
        }
        let norm = big(&a_const) * big(&a_const) * &self.d - big(&b_const) * big(&b_const);
        Ok(ShiftConstants {
            t,
            v,
            w,
            unit: self.unit.clone(),
            a_const,
            b_const,
            norm,
        })
    }
}

/// Constants that turn digit shifts into multiplication by `sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftConstants {
    pub t: usize,
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    /// `U = a_const * sqrt(d) + b_const`.
    pub unit: QuadRat,
    pub a_const: BigInt,
    pub b_const: BigInt,
    /// `a_const^2 * d - b_const^2`; `±1` for integral `d`.
    pub norm: Rational,
}

/// Rescales `d` into `(9/4, 4)`: returns `(d_norm, scale)` with
/// `d = scale^2 * d_norm` and `3/2 < sqrt(d_norm) < 2`.
pub fn normalize_d(d: &Rational) -> Result<(Rational, Rational)> {
    QuadRat::sqrt(d.clone())?;
    let lower = d / Rational::from_integer(4.into());
    let upper = d * Rational::new(4.into(), 9.into());
    // scale = h / 2^e; the admissible window for h widens with e.
    let mut pow4 = Rational::one();
    let mut pow2 = BigInt::one();
    loop {
        let lo = &lower * &pow4;
        let h = lo.floor().to_integer().sqrt() + 1u32;
        let h2 = Rational::from_integer(&h * &h);
        if h2 > lo && h2 < &upper * &pow4 {
            let scale = Rational::new(h, pow2);
            let d_norm = d / (&scale * &scale);
            return Ok((d_norm, scale));
        }
        pow4 *= Rational::from_integer(4.into());
        pow2 *= 2u32;
    }
}

/// Smallest integer `k` with `beta`-tail `|beta_{k-1}| + |beta_k|` below
/// `bound`, if one is materialized.
pub(crate) fn tail_index_below(cf: &CfExpansion, bound: &Rational) -> Option<usize> {
    (1..=cf.depth()).find(|&k| {
        let tail = &cf.beta(k - 1).abs() + &cf.beta(k).abs();
        tail.cmp_rational(bound).is_lt()
    })
}
