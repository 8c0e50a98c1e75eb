//! Scenario files, residual reports and the subcommands of the `qsplit` tool.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use error::CliError;
