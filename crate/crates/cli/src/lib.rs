//! Audit harness and command-line plumbing for `ostro-core`.

pub mod config;
pub mod error;
pub mod harness;
pub mod report;

pub use config::SuiteConfig;
pub use error::{CliError, CliResult};
pub use harness::run_suite;
pub use report::AuditReport;
