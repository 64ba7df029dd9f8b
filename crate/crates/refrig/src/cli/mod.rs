//! Command-line front end: JSON configs, deterministic CSV/JSON tables,
//! minimal SVG plots, and the report/sweep/figure/validate commands.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

pub use commands::{
    cmd_figure, cmd_report, cmd_sweep, cmd_validate, load_config, CliError, CommandOutput,
    OutputOptions, EXIT_CONFIG, EXIT_OK, EXIT_OUT_OF_WINDOW, EXIT_VALIDATION,
};
pub use config::{RunConfig, Tolerances};
pub use table::ResultTable;
