//! Argument parsing and dispatch for the `totdens` binary.

pub mod config;
pub mod run;

pub use config::{parse_args, Command, OutputFormat, RunConfig, CACHE_DIR_ENV};
pub use run::run;
