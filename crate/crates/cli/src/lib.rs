//! Command-line front end for the detection-probability model.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_args, RunConfig, Task};
pub use error::CliError;
pub use output::{RunManifest, RunOutput};
pub use run::{execute, run};
