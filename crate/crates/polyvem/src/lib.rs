//! File formats, CSV/SVG reporting and the command-line pipeline around
//! `polyvem-core`.

pub mod commands;
pub mod config;
pub mod polymesh;
pub mod svg;
pub mod table;

pub use commands::{run, CliError};
pub use config::RunConfig;
