use std::fmt::Write as _;

use ostro_core::audit::{FactRecord, Verdict};
use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;

/// Outcome of one sweep over many cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub cases: u64,
    /// Present only for checks with a separately printed form.
    pub printed: Option<Verdict>,
    pub corrected: Verdict,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicandReport {
    pub d: String,
    pub a0: String,
    pub period: Vec<u64>,
    pub m: usize,
    pub unit: String,
    pub facts: Vec<FactRecord>,
    pub checks: Vec<CheckRecord>,
    pub millis: u64,
}

impl RadicandReport {
    pub fn corrected_failures(&self) -> usize {
        self.facts.iter().filter(|f| !f.corrected.holds()).count()
            + self.checks.iter().filter(|c| !c.corrected.holds()).count()
    }

    pub fn printed_failures(&self) -> usize {
        self.facts.iter().filter(|f| !f.printed.holds()).count()
            + self
                .checks
                .iter()
                .filter(|c| c.printed.is_some_and(|p| !p.holds()))
                .count()
    }

    pub fn fact(&self, id: &str) -> Option<&FactRecord> {
        self.facts.iter().find(|f| f.fact_id == id)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub radicands: usize,
    pub checks: usize,
    pub corrected_failures: usize,
    pub printed_failures: usize,
    pub ok: bool,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: SuiteConfig,
    pub radicands: Vec<RadicandReport>,
    pub summary: Summary,
}

impl AuditReport {
    pub fn new(config: SuiteConfig, radicands: Vec<RadicandReport>, millis: u64) -> Self {
        let corrected_failures = radicands
            .iter()
            .map(RadicandReport::corrected_failures)
            .sum();
        let summary = Summary {
            radicands: radicands.len(),
            checks: radicands
                .iter()
                .map(|r| r.facts.len() + r.checks.len())
                .sum(),
            corrected_failures,
            printed_failures: radicands.iter().map(RadicandReport::printed_failures).sum(),
            ok: corrected_failures == 0,
            millis,
        };
        Self {
            config,
            radicands,
            summary,
        }
    }

    /// 0 when every corrected form holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.ok {
            0
        } else {
            1
        }
    }

    pub fn radicand(&self, d: &str) -> Option<&RadicandReport> {
        self.radicands.iter().find(|r| r.d == d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per fact or check: `d kind name cases printed corrected detail`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("d\tkind\tname\tcases\tprinted\tcorrected\tdetail\n");
        for r in &self.radicands {
            for f in &r.facts {
                let detail = f
                    .witness
                    .as_ref()
                    .map(|w| format!("k={} lhs={} rhs={}", w.k, w.lhs, w.rhs))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{}\tfact\t{}\t\t{}\t{}\t{}",
                    r.d,
                    f.fact_id,
                    verdict(Some(f.printed)),
                    verdict(Some(f.corrected)),
                    detail
                );
            }
            for c in &r.checks {
                let _ = writeln!(
                    out,
                    "{}\tcheck\t{}\t{}\t{}\t{}\t{}",
                    r.d,
                    c.check,
                    c.cases,
                    verdict(c.printed),
                    verdict(Some(c.corrected)),
                    c.first_failure.as_deref().unwrap_or("")
                );
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.radicands {
            let _ = writeln!(
                out,
                "d = {}  period {:?}  m = {}  U = {}  ({} ms)",
                r.d, r.period, r.m, r.unit, r.millis
            );
            for f in &r.facts {
                let _ = write!(
                    out,
                    "  fact  {:<18} printed {:<5} corrected {:<5}",
                    f.fact_id,
                    verdict(Some(f.printed)),
                    verdict(Some(f.corrected))
                );
                if let Some(w) = &f.witness {
                    let _ = write!(out, "  k = {}: {} vs {}", w.k, w.lhs, w.rhs);
                }
                out.push('\n');
            }
            for c in &r.checks {
                let _ = write!(
                    out,
                    "  check {:<18} printed {:<5} corrected {:<5} cases {}",
                    c.check,
                    verdict(c.printed),
                    verdict(Some(c.corrected)),
                    c.cases
                );
                if let Some(f) = &c.first_failure {
                    let _ = write!(out, "  first failure: {f}");
                }
                out.push('\n');
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} radicands, {} checks, {} corrected failures, {} printed failures, {} ms: {}",
            s.radicands,
            s.checks,
            s.corrected_failures,
            s.printed_failures,
            s.millis,
            if s.ok { "OK" } else { "FAILED" }
        );
        out
    }
}

fn verdict(v: Option<Verdict>) -> &'static str {
    match v {
        Some(Verdict::Holds) => "holds",
        Some(Verdict::Fails) => "fails",
        None => "-",
    }
}
