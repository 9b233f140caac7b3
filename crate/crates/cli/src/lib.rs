//! Scenario files in, CSV tables out.
//!
//! `wep-torsim <mode> --config <path> --out <dir>` loads a TOML scenario,
//! evaluates one or more tables on a rayon pool and writes each as CSV plus a
//! `manifest.txt`. Rows are merged in index order, so the bytes written only
//! depend on the config file, the seed and the tool version.

pub mod config;
pub mod run;
pub mod table;

pub use config::{load_config, parse_config, Mode, Scenario, ScenarioConfig};
pub use run::{run, verify_dir, RunSummary};
pub use table::{format_f64, ResultTable};

pub const TOOL_VERSION: &str = concat!("wep-torsim ", env!("CARGO_PKG_VERSION"));
/// Overrides `--out` when set.
pub const OUT_ENV: &str = "WEP_TORSIM_OUT";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}
