//! The `leray` command-line tool: reads complexes, sheaves, filtrations and
//! maps from JSON files and prints tables or JSON records.
//!
//! Exit codes: `0` success or PASS, `1` a verification failed, `2` the input
//! was invalid.

pub mod commands;
pub mod input;
pub mod output;

pub use commands::{run, Cli, Command, Outcome};
pub use output::Report;
