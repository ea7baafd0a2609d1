//! Command-line front end for `cdyn-core`.
//!
//! This crate owns everything that needs `std`: text and file formats,
//! `key=value` config files, task-parallel sampling on rayon, and the `cdyn`
//! binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod parallel;

pub use error::{CliError, CliResult};
