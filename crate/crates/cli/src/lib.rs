//! Library side of the `tracklqr` command line: configuration parsing and
//! resolution, solver invocation, and output writing. The binary in
//! `main.rs` is a thin argument-parsing shell over these modules so that
//! everything here is testable in-process.

pub mod config;
pub mod report;
pub mod run;
pub mod verify;
