//! Scenario-driven front end for `advnet`: parses scenario files, runs them
//! against the core, caches results and renders reports.

pub mod cache;
pub mod report;
pub mod run;
pub mod scenario;

pub use report::{render, Format, ReportRow, Status};
pub use run::{run_file, run_report, run_scenario, RunConfig};
pub use scenario::{Command, Scenario};
