//! The audit: every identity and sweep, per radicand.

use std::time::Instant;

use num_bigint::BigInt;
use ostro_core::audit::Verdict;
use ostro_core::oracle::{enumerate_valid, value_of, FTable};
use ostro_core::probes::{probe_e, probe_g, probe_g_printed, probe_h, probe_periodic_class};
use ostro_core::shiftcalc::{
    check_recover_n, check_unit_shift, lambda_general, lambda_on_f, lambda_on_n,
};
use ostro_core::text::format_rational;
use ostro_core::{CfExpansion, Error, OstDigits, QuadRat, Rational, ShiftConstants};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::SuiteConfig;
use crate::error::CliResult;
use crate::report::{AuditReport, CheckRecord, RadicandReport};

/// Runs the whole suite; radicands are audited concurrently.
pub fn run_suite(cfg: &SuiteConfig) -> CliResult<AuditReport> {
    let start = Instant::now();
    let ds = cfg.parsed_radicands()?;
    let eps = cfg.eps_value()?;
    let reports = ds
        .par_iter()
        .enumerate()
        .map(|(i, d)| audit_radicand(d, cfg, &eps, i as u64))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(AuditReport::new(
        cfg.clone(),
        reports,
        start.elapsed().as_millis() as u64,
    ))
}

/// Accumulates one sweep, remembering the first failing case.
struct Tally {
    name: &'static str,
    cases: u64,
    printed: Option<bool>,
    corrected: bool,
    first_failure: Option<String>,
    printed_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            printed: None,
            corrected: true,
            first_failure: None,
            printed_failure: None,
        }
    }

    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.corrected = false;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn dual(&mut self, printed: bool, corrected: bool, detail: impl Fn() -> String) {
        let seen = self.printed.unwrap_or(true);
        self.printed = Some(seen && printed);
        if !printed && self.printed_failure.is_none() {
            self.printed_failure = Some(detail());
        }
        self.case(corrected, detail);
    }

    /// Turns a verification error into a failed case; other errors abort.
    fn outcome<T>(
        &mut self,
        r: ostro_core::Result<T>,
        detail: impl FnOnce() -> String,
    ) -> CliResult<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::VerificationFailed(msg)) => {
                self.case(false, || format!("{}: {msg}", detail()));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn finish(self) -> CheckRecord {
        CheckRecord {
            check: self.name.to_string(),
            cases: self.cases,
            printed: self.printed.map(Verdict::from_bool),
            corrected: Verdict::from_bool(self.corrected),
            first_failure: self.first_failure.or(self.printed_failure),
        }
    }
}

pub fn audit_radicand(
    d: &Rational,
    cfg: &SuiteConfig,
    eps: &Rational,
    stream: u64,
) -> CliResult<RadicandReport> {
    let start = Instant::now();
    let cf = CfExpansion::expand(d, cfg.depth)?;
    let facts = cf.audit_identities()?;
    let consts = cf.derive_shift_constants()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);

    let mut checks = vec![check_shape(&cf), check_constants(&cf, &consts)];
    checks.extend(sweep_naturals(&cf, &consts, cfg.n_max)?);
    checks.push(check_uniqueness(&cf, cfg.uniqueness_max)?);
    checks.push(check_lambda_general(&cf, &consts, eps, cfg, &mut rng)?);
    checks.push(check_g_windows(&cf, cfg.probe_levels)?);
    checks.extend(check_probes(&cf, cfg, &mut rng)?);
    checks.push(check_periodic(&cf, cfg.periodic_levels)?);

    Ok(RadicandReport {
        d: format_rational(d),
        a0: cf.a0().to_string(),
        period: cf.period().to_vec(),
        m: cf.m(),
        unit: cf.unit().to_string(),
        facts,
        checks,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// Palindromic body and final partial quotient `2 a0`.
pub fn check_shape(cf: &CfExpansion) -> CheckRecord {
    let mut t = Tally::new("cf_shape");
    let period = cf.period();
    let (body, last) = period.split_at(period.len() - 1);
    let palindrome = body.iter().eq(body.iter().rev());
    let doubled = BigInt::from(last[0]) == cf.a0() * 2u32;
    t.case(palindrome && doubled, || format!("period {period:?}"));
    t.finish()
}

/// `q_j = v_{j mod t} p_{j+1} + w_{j mod t} p_j` at every materialized `j`.
pub fn check_constants(cf: &CfExpansion, k: &ShiftConstants) -> CheckRecord {
    let mut t = Tally::new("shift_constants");
    for j in 0..cf.depth() - 1 {
        let i = j % k.t;
        let rhs = &k.v[i] * Rational::from_integer(cf.p(j + 1).clone())
            + &k.w[i] * Rational::from_integer(cf.p(j).clone());
        let lhs = Rational::from_integer(cf.q(j).clone());
        t.case(lhs == rhs, || format!("j = {j}: {lhs} != {rhs}"));
    }
    t.finish()
}

fn sweep_naturals(
    cf: &CfExpansion,
    consts: &ShiftConstants,
    n_max: u64,
) -> CliResult<Vec<CheckRecord>> {
    let mut roundtrip = Tally::new("roundtrip");
    let mut mult = Tally::new("mult_nat");
    let mut unit = Tally::new("unit_shift");
    let mut recover = Tally::new("recover_n");
    let mut on_f = Tally::new("lambda_on_f");
    let mut on_n = Tally::new("lambda_on_n");
    let sqrt_d = cf.sqrt_d();
    for n in 0..=n_max {
        let big = BigInt::from(n);
        let x = OstDigits::encode_nat(&big, cf)?;
        roundtrip.case(x.is_valid() && x.decode_nat() == big, || {
            format!("n = {n}: {x}")
        });

        let (p, frac) = x.mult_nat_by_sqrt();
        let scaled = sqrt_d.scale(&Rational::from_integer(big.clone()));
        let f = frac.f_of();
        let assembled = &f + &sqrt_d.lift(Rational::from_integer(p));
        mult.case(assembled == scaled, || format!("n = {n}: {assembled}"));

        let e = check_unit_shift(&x)?;
        unit.dual(e.printed.holds(), e.corrected.holds(), || {
            format!("n = {n}: {} vs {}", e.lhs, e.rhs)
        });
        let e = check_recover_n(&x, consts)?;
        recover.dual(e.printed.holds(), e.corrected.holds(), || {
            format!("n = {n}: {} vs {}", e.lhs, e.rhs)
        });

        if let Some(v) = on_f.outcome(lambda_on_f(&x, consts), || format!("n = {n}"))? {
            on_f.case(v == sqrt_d * &f, || format!("n = {n}: {v}"));
        }
        if let Some(v) = on_n.outcome(lambda_on_n(&big, cf), || format!("n = {n}"))? {
            on_n.case(v == scaled, || format!("n = {n}: {v}"));
        }
    }
    Ok([roundtrip, mult, unit, recover, on_f, on_n]
        .map(Tally::finish)
        .to_vec())
}

/// Every valid string of the length covering `0..=limit` names a distinct
/// integer, all integers below `q_len` are named, and the greedy encoder
/// produces exactly those strings.
pub fn check_uniqueness(cf: &CfExpansion, limit: u64) -> CliResult<CheckRecord> {
    let mut t = Tally::new("uniqueness");
    let bound = BigInt::from(limit);
    let len = (0..cf.depth())
        .find(|&k| cf.q(k) > &bound)
        .ok_or(Error::DepthExceeded {
            needed: cf.depth() + 1,
            depth: cf.depth(),
        })?;
    let top: usize = cf
        .q(len)
        .try_into()
        .map_err(|_| Error::Overflow(cf.q(len).to_string()))?;
    let mut seen = vec![false; top];
    for s in enumerate_valid(cf, len) {
        let n = value_of(cf, &s);
        let idx: usize = (&n).try_into().unwrap_or(usize::MAX);
        let fresh = idx < top && !seen[idx];
        if fresh {
            seen[idx] = true;
        }
        let enc = OstDigits::encode_nat(&n, cf)?;
        let mut padded = enc.digits().to_vec();
        padded.resize(len, 0);
        t.case(fresh && padded == s, || format!("{s:?} -> {n}"));
    }
    let missing = seen.iter().position(|&b| !b);
    t.case(missing.is_none(), || {
        format!("{} has no valid string", missing.unwrap_or(0))
    });
    Ok(t.finish())
}

pub fn check_lambda_general(
    cf: &CfExpansion,
    consts: &ShiftConstants,
    eps: &Rational,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> CliResult<CheckRecord> {
    let mut t = Tally::new("lambda_general");
    for _ in 0..cfg.lambda_samples {
        let num = rng.gen_range(0..=cfg.lambda_x_max * 1000);
        let x = cf.sqrt_d().lift(Rational::new(num.into(), 1000.into()));
        if let Some(res) = t.outcome(lambda_general(&x, eps, cf, consts), || format!("x = {x}"))? {
            let err = (&res.value - &(cf.sqrt_d() * &x)).abs();
            t.case(err.cmp_rational(eps).is_lt(), || {
                format!("x = {x}: error {err}")
            });
        }
    }
    Ok(t.finish())
}

/// The offset window is non-empty at every level.
pub fn check_g_windows(cf: &CfExpansion, levels: usize) -> CliResult<CheckRecord> {
    let mut t = Tally::new("g_window");
    for l in 0..=levels {
        let (a, b) = probe_g(cf, l)?;
        let (pa, pb) = probe_g_printed(cf, l)?;
        t.dual(pa < pb, a < b, || format!("l = {l}: ({pa}, {pb})"));
    }
    Ok(t.finish())
}

fn random_point(cf: &CfExpansion, rng: &mut ChaCha8Rng) -> QuadRat {
    let (lo, _) = cf.interval();
    let num: u64 = rng.gen_range(0..1_000_000);
    &lo + &lo.lift(Rational::new(num.into(), 1_000_000.into()))
}

/// Truncation and digit probes against brute force and the real encoder.
/// Levels whose search space exceeds `brute_force_limit` are checked
/// through the window certificate inside `probe_h` only.
pub fn check_probes(
    cf: &CfExpansion,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> CliResult<Vec<CheckRecord>> {
    let levels = cfg.probe_levels;
    let mut windows = Tally::new("h_window");
    let mut brute = Tally::new("probe_h");
    let mut certified = Tally::new("probe_h_certified");
    let mut digit = Tally::new("probe_e");
    let limit = BigInt::from(cfg.brute_force_limit);
    let searchable = (0..=levels).take_while(|&l| cf.q(l + 1) <= &limit).count();
    let table_len = if searchable == 0 {
        0
    } else {
        cf.q(searchable)
            .try_into()
            .map_err(|_| Error::Overflow(cf.q(searchable).to_string()))?
    };
    let table = FTable::new(cf, table_len);
    for _ in 0..cfg.probe_samples {
        let c = random_point(cf, rng);
        let digits = OstDigits::encode_real(&c, cf, levels + 1)?;
        for l in 0..=levels {
            let Some(h) = certified.outcome(probe_h(cf, l, &c), || format!("l = {l}, c = {c}"))?
            else {
                continue;
            };
            certified.case(true, String::new);
            if l < searchable {
                let hits = table.h_candidates(l, &c)?;
                let printed = table.printed_h_candidates(l, &c)?;
                windows.dual(printed.len() == 1, hits.len() == 1, || {
                    format!(
                        "l = {l}, c = {c}: {} printed, {} corrected candidates",
                        printed.len(),
                        hits.len()
                    )
                });
                brute.case(hits.len() == 1 && BigInt::from(hits[0]) == h, || {
                    format!("l = {l}, c = {c}: {h} vs {hits:?}")
                });
            }
            let want = digits.digits().get(l).copied().unwrap_or(0);
            let got = probe_e(cf, l, &c)?;
            digit.case(got == want, || format!("l = {l}, c = {c}: {got} vs {want}"));
        }
    }
    Ok([windows, brute, certified, digit]
        .map(Tally::finish)
        .to_vec())
}

/// Membership of `l = j mod n` for `n` in `{2, 3}`. At `l = 0` the class
/// with `j = 0` is empty when `a_1 = 1`, since no digit may sit there.
pub fn check_periodic(cf: &CfExpansion, levels: usize) -> CliResult<CheckRecord> {
    let mut t = Tally::new("periodic_class");
    let zero_allowed = cf.digit_bound(1) >= 2;
    for n_mod in [2, 3] {
        for j in 0..n_mod {
            let got = probe_periodic_class(cf, j, n_mod, levels)?;
            let naive: Vec<bool> = (0..=levels).map(|l| l % n_mod == j).collect();
            let expected: Vec<bool> = (0..=levels)
                .map(|l| l % n_mod == j && (l > 0 || zero_allowed))
                .collect();
            t.dual(got == naive, got == expected, || {
                format!("j = {j}, n = {n_mod}: {got:?}")
            });
        }
    }
    Ok(t.finish())
}

/// Expands `d` at `depth`, doubling the depth until `f` stops asking for
/// more or `cap` is reached.
pub fn with_growing_depth<T>(
    d: &Rational,
    depth: usize,
    cap: usize,
    mut f: impl FnMut(&CfExpansion) -> ostro_core::Result<T>,
) -> ostro_core::Result<T> {
    let mut depth = depth.min(cap);
    loop {
        let cf = CfExpansion::expand(d, depth)?;
        match f(&cf) {
            Err(Error::DepthExceeded { needed, .. }) if depth < cap => {
                depth = (depth * 2).max(needed + 1).min(cap);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            radicands: vec!["3".into(), "3/2".into()],
            n_max: 60,
            lambda_samples: 4,
            probe_samples: 3,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(&small()).unwrap();
        assert!(report.summary.ok, "{}", report.to_text());
        assert_eq!(report.exit_code(), 0);
        let three = report.radicand("3").unwrap();
        let link = three.fact("pq_link").unwrap();
        assert_eq!(link.printed, Verdict::Fails);
        assert_eq!(link.witness.as_ref().unwrap().k, 1);
        assert_eq!(
            three.check("unit_shift").unwrap().printed,
            Some(Verdict::Fails)
        );
        assert_eq!(three.check("roundtrip").unwrap().cases, 61);
    }

    #[test]
    fn reports_round_trip_through_json() {
        let report = run_suite(&small()).unwrap();
        let back: AuditReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert!(report.to_tsv().lines().count() > 10);
    }

    #[test]
    fn depth_grows_on_demand() {
        let d = Rational::from_integer(3.into());
        let got = with_growing_depth(&d, 4, 64, |cf| cf.require(40).map(|_| cf.depth())).unwrap();
        assert!(got > 40);
        let err = with_growing_depth(&d, 4, 16, |cf| cf.require(40)).unwrap_err();
        assert!(matches!(err, Error::DepthExceeded { .. }));
    }
}
