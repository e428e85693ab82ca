//! Command-line front end: config parsing, experiment dispatch and output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, RunConfig};
pub use error::HarnessError;
pub use output::OutputRecord;
pub use run::{execute, run_experiment};
