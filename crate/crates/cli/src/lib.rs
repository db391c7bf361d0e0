//! Library side of the `coastpca` command: configuration, subcommand
//! implementations, run reports and atomic output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod report;
