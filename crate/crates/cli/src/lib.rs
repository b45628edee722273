//! Scenario runner behind the `sp-distill` command.

pub mod config;
pub mod report;
pub mod scenario;

pub use config::{validate_str, validate_value, ExperimentConfig, Scenario, Violation};
pub use report::{Cell, RunError, ScenarioOutput, ScenarioReport, Table};
pub use scenario::{run, RunOptions};
