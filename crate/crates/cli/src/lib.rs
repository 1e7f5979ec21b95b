//! Configuration, presets, grid runs and table output for `qzeno`.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{emit_config, parse_config, RunConfig};
pub use error::{CliError, ConfigError};
pub use run::{run, RunReport};
