//! Command-line front end and file formats for `tripsim-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use error::{CliError, CliResult};
