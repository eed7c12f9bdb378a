//! Scenario runner for monomial quadratic-transform sequences: JSON scenario
//! files in, JSON reports and CSV traces out.

pub mod checks;
pub mod config;
pub mod report;
pub mod runner;
pub mod verify;

pub use checks::{explain, CheckError, CheckInfo, Status, Verdict, CHECKS};
pub use config::{ConfigError, ScenarioConfig};
pub use report::Report;
pub use runner::{run, run_scenario, write_outputs, RunError, RunOptions};
