//! Verdict records shared by the identity checks.
//!
//! Each identity is checked in two variants: `printed`, the form with the
//! original index bookkeeping, and `corrected`, the form actually used by
//! the rest of the crate. Only corrected failures indicate a defect here.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one continued-fraction identity over all materialized indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactRecord {
    pub fact_id: String,
    pub printed: Verdict,
    pub corrected: Verdict,
    /// First counterexample: from the corrected form if it fails, otherwise
    /// from the printed form, otherwise none.
    pub witness: Option<Witness>,
}

/// Outcome of one digit-level identity at a single `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub lemma: String,
    pub n: u64,
    pub printed: Verdict,
    pub corrected: Verdict,
    /// Corrected left-hand side, in the `a+b*sqrt(d)` text form.
    pub lhs: String,
    pub rhs: String,
}

/// Accumulates checks of one identity, remembering the first failure of
/// each variant.
#[derive(Debug)]
pub(crate) struct FactCheck {
    id: &'static str,
    printed_fail: Option<Witness>,
    corrected_fail: Option<Witness>,
}

impl FactCheck {
    pub(crate) fn new(id: &'static str) -> Self {
        Self {
            id,
            printed_fail: None,
            corrected_fail: None,
        }
    }

    pub(crate) fn printed(&mut self, k: i64, lhs: impl ToString, rhs: impl ToString, ok: bool) {
        if !ok && self.printed_fail.is_none() {
            self.printed_fail = Some(Witness {
                k,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub(crate) fn corrected(&mut self, k: i64, lhs: impl ToString, rhs: impl ToString, ok: bool) {
        if !ok && self.corrected_fail.is_none() {
            self.corrected_fail = Some(Witness {
                k,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    /// Records the same comparison for both variants.
    pub(crate) fn both(&mut self, k: i64, lhs: impl ToString, rhs: impl ToString, ok: bool) {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        self.printed(k, &lhs, &rhs, ok);
        self.corrected(k, lhs, rhs, ok);
    }

    pub(crate) fn finish(self) -> FactRecord {
        FactRecord {
            fact_id: self.id.to_string(),
            printed: Verdict::from_bool(self.printed_fail.is_none()),
            corrected: Verdict::from_bool(self.corrected_fail.is_none()),
            witness: self.corrected_fail.or(self.printed_fail),
        }
    }
}
