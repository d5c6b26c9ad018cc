//! Configuration, run directories and the command-line front end.

mod cli;
mod commands;
mod config;
mod manifest;

pub use cli::{dispatch, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, OUT_ROOT_VAR};
pub use commands::Command;
pub use config::{Experiment, RunConfig, SequenceSource};
pub use manifest::{RunManifest, RunWriter, MANIFEST_FILE};
