//! File formats, configuration, SVG rendering and commands behind the `roomframe` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod svg;

pub use error::{CliError, Result};
