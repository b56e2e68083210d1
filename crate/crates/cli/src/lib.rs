//! Library half of the `udwsim` command-line tool: configuration schema,
//! table serialization and the subcommand implementations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use table::{Cell, Format, Table};
