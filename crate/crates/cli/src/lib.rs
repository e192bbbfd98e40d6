//! Configuration parsing, command dispatch and deterministic output for
//! the `secgame` experiment runner.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run_command, CommandName};
pub use config::{Config, ConfigError};
pub use output::RunManifest;
