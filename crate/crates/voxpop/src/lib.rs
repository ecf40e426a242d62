//! File formats, reports and the command-line driver around `voxpop-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use error::{CliError, Result};
