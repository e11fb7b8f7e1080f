//! Benchmark harness and file plumbing behind the `pamo` command.

pub mod report;
pub mod suite;
pub mod trajectory;

pub use report::{emit_report, Aggregate, Report};
pub use suite::{corner_endpoints, run_suite, run_suite_with, BenchSuite, RunOutcome, RunRecord, SolverMode};
