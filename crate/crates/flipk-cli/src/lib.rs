//! Document schema and report rendering for the `flipk` binary.

pub mod report;
pub mod schema;
