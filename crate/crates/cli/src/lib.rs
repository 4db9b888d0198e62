//! Command implementations behind the `admire` binary.
//!
//! Kept in a library so integration tests can drive the same code paths
//! as the command line.

pub mod bench;
pub mod cli;
pub mod commands;

pub use cli::{Cli, Command};
pub use commands::run;
