//! Batch experiments: configuration, the six commands, and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{
    cmd_charex, cmd_embedding_sweep, cmd_hardy_suite, cmd_mpinfty_embedding, cmd_verify, cmd_wbv_equivalence, run, sweep_grid, GridPoint,
    RATIO_WINDOW, SPREAD_LIMIT,
};
pub use config::{default_bank, fmt_real, parse_real, Experiment, ExperimentConfig};
pub use report::{summary_path, Check, Outcome, Summary, Table, BUILD_DESCRIBE, SCHEMA_VERSION};
