//! Scenario runner for the drier transport models: config parsing, a
//! registry of runnable scenario kinds, and result persistence.

// Validation uses `!(x > 0.0)` so that NaN fails the check as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bundle;
pub mod config;
pub mod error;
pub mod registry;
pub mod scenarios;

pub use bundle::{ResultBundle, Summary};
pub use config::ScenarioConfig;
pub use error::CliError;
pub use registry::{
    find_scenario, registry, run_config_file, run_scenario, validate_config_file, RunOptions,
};
