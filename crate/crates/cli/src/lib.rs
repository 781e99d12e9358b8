//! Command line driver for `contraction-core`: a small module-definition
//! language, the subcommands, and deterministic report emission.

mod commands;
pub mod dsl;
pub mod report;

pub use commands::{run, run_with_stdin, tempered_sample, Outcome, JOBS_ENV};
