//! Command-line front end for `riordan-core`.

pub mod cmd;
pub mod error;
pub mod format;

pub use cmd::{execute, Cli, Command};
pub use error::CliError;
