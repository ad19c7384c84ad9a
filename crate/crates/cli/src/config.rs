use std::path::Path;

use ostro_core::text::parse_rational;
use ostro_core::{QuadRat, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable that caps every expansion depth.
pub const MAX_DEPTH_VAR: &str = "OSTRO_MAX_DEPTH";

pub const DEFAULT_RADICANDS: &[&str] = &[
    "2", "3", "5", "6", "7", "8", "10", "11", "12", "13", "14", "15", "19", "31", "61", "3/2",
    "5/3", "7/2", "32/9", "7/3", "13/5",
];

/// Parameters of an audit run. Also the on-disk JSON schema of `--config`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub radicands: Vec<String>,
    /// Convergents materialized per radicand.
    pub depth: usize,
    /// Sweeps cover `0..=n_max`.
    pub n_max: u64,
    /// Exhaustive uniqueness covers every value below the first `q_k` above this.
    pub uniqueness_max: u64,
    pub eps: String,
    pub lambda_samples: usize,
    /// Random `x` for the general multiplication are drawn from `[0, lambda_x_max]`.
    pub lambda_x_max: u64,
    pub probe_levels: usize,
    pub probe_samples: usize,
    /// Exhaustive truncation search runs only at levels with `q_{l+1}` up to this.
    pub brute_force_limit: u64,
    pub periodic_levels: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            radicands: DEFAULT_RADICANDS.iter().map(|s| s.to_string()).collect(),
            depth: 64,
            n_max: 10_000,
            uniqueness_max: 500,
            eps: "1e-9".into(),
            lambda_samples: 100,
            lambda_x_max: 100,
            probe_levels: 8,
            probe_samples: 100,
            brute_force_limit: 20_000,
            periodic_levels: 12,
            seed: 0x05_7201_0f5c,
        }
    }
}

impl SuiteConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Parses every radicand, rejecting squares and non-positive values.
    pub fn parsed_radicands(&self) -> CliResult<Vec<Rational>> {
        if self.radicands.is_empty() {
            return Err(CliError::Config("no radicands".into()));
        }
        self.radicands
            .iter()
            .map(|s| {
                let d = parse_rational(s)?;
                QuadRat::sqrt(d.clone())?;
                Ok(d)
            })
            .collect()
    }

    pub fn eps_value(&self) -> CliResult<Rational> {
        let eps = parse_rational(&self.eps)?;
        if eps <= Rational::from_integer(0.into()) {
            return Err(ostro_core::Error::OutOfDomain(format!(
                "eps = {} must be positive",
                self.eps
            ))
            .into());
        }
        Ok(eps)
    }

    /// Lowers `depth` to the cap in `OSTRO_MAX_DEPTH`, if set.
    pub fn apply_depth_cap(&mut self) -> CliResult<()> {
        if let Some(cap) = depth_cap()? {
            self.depth = self.depth.min(cap);
        }
        Ok(())
    }
}

/// The value of `OSTRO_MAX_DEPTH`, if set.
pub fn depth_cap() -> CliResult<Option<usize>> {
    match std::env::var(MAX_DEPTH_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{MAX_DEPTH_VAR}={v:?} is not a depth"))),
        Err(_) => Ok(None),
    }
}
