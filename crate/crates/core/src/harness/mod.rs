//! Verification harness: builtin groups, suites and their reports.

mod builtin;
mod report;
mod suites;

pub use builtin::{builtin_group, LoadError, TestGroup};
pub use report::{Counterexample, VerificationReport, MAX_RECORDED_FAILURES};
pub use suites::{random_reduced_word, run_suite, Suite};
