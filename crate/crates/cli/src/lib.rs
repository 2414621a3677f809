//! Experiment runner behind the `qcost` binary: configuration parsing, the
//! parameter sweeps, and CSV/SVG output.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{parse_config, parse_config_with, ConfigError, Experiment, RunConfig};
pub use experiments::{run_experiment, RunError};
pub use output::{format_number, render_csv, render_svg, Table};
