//! File formats and command implementations behind the `ensdist` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod number;

pub use commands::{run, Cli};
pub use error::CliError;
