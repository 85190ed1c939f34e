//! Batch runner for the wandering-subspace workbench: JSON scenarios in,
//! CSV or JSON-lines reports out.

pub mod checks;
pub mod error;
pub mod report;
pub mod runner;
pub mod scenario;

pub use checks::CheckKind;
pub use error::CliError;
pub use report::{Format, ReportRow};
pub use scenario::{Overrides, Scenario};
