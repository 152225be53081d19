//! Batch verification of the identity catalog and the finite-N studies.
//!
//! A [`SuiteConfig`] (JSON) lists identity grids and convergence studies;
//! [`run_suite`] evaluates them and returns a [`SuiteReport`] that
//! [`emit_report`] writes as JSON or CSV.

pub mod config;
pub mod error;
pub mod report;
pub mod suite;

pub use config::{Format, SuiteConfig};
pub use error::ConfigError;
pub use report::{emit_report, parse_csv, parse_json};
pub use suite::{run_suite, Outcome, SuiteReport, Summary};
