//! Batch verification: seeded instances, invariant suites and report tables.

mod generator;
mod suites;
pub mod tables;

pub use generator::{contour_point, z_grid, InstanceGenerator};
pub use suites::{run_verify, Failure, SuiteReport, VerifyConfig, VerifyReport};
