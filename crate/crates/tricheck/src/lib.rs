//! Command-line front end, parallel differential fuzzing and rendering
//! for [`tricheck_core`].

pub mod cli;
pub mod fuzz;
pub mod render;

pub use fuzz::{differential_run, FailureRecord, Harness, Report};
