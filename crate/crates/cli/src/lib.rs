//! Configuration parsing, command execution and table output for the `qhj`
//! command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{run_command, Command, Outcome, Status};
pub use config::{parse_config, RunConfig};
pub use error::CliError;
pub use table::{emit_table, Cell, Format, Table};
