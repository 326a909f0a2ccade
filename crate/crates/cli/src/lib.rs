//! Command-line front end: a TOML configuration selects a system preset,
//! parameters and one experiment, and the run writes CSV tables plus a
//! JSON summary.

pub mod config;
pub mod run;

pub use config::{parse_config, render_config, Experiment, RunConfig};
pub use run::{execute, run, Artifacts, Assertion, Summary};
