//! Batch front end: a TOML or JSON job of ideals, families and tasks in,
//! a JSON report or CSV tables out.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{parse_config, ConfigError, JobConfig};
pub use run::{run, Overrides, RunReport};
