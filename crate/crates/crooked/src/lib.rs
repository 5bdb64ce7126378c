//! File formats, reports, SVG rendering and the command-line front end for
//! `crooked-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod svg;
pub mod tower_dir;

pub use error::{CliError, Result};
