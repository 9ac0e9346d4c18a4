//! Reads a scenario, assembles its potential, solves the critical point
//! equations and writes a JSON report.

pub mod config;
pub mod report;
pub mod run;
pub mod scenarios;

pub use config::{parse_config, render, ConfigError, FieldMode, Scenario, ScenarioKind};
pub use report::Report;
pub use run::{run, RunError, RunOptions};
