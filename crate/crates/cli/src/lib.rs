//! Verification harness behind the `adnrg` binary: experiment registry,
//! runners, and bit-stable report emission.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentId};
pub use experiments::run_experiment;
pub use report::{ReportFormat, VerifyReport};
