//! Command-line companion to `polmech-core`: configuration files, single-point
//! reports, figure sweeps, stochastic runs and the acceptance suite.
//!
//! All numeric CSV output uses scientific notation with 13 significant digits.

// `!(x > y)` keeps NaN on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod lattice_table;
pub mod model;
pub mod report;
pub mod sim;
pub mod sweep;

pub use polmech_core as core;

/// `polmech <version>`, the first provenance line of every CSV file.
pub fn version_line() -> String {
    format!("polmech {}", env!("CARGO_PKG_VERSION"))
}
