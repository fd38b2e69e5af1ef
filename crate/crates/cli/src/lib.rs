//! Library side of the `tailsum` command: configuration, experiment
//! runners and CSV/SVG output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use error::{CliError, Result};
