//! File formats, parallel execution and the command line for `cohpbw-core`.

pub mod cli;
pub mod error;
pub mod manifest;
pub mod parallel;
pub mod trace_csv;

pub use error::CliError;
