//! Batch runner for gap, constellation, sieve and baseline experiments, with
//! golden-file verification.

use std::path::PathBuf;

use thiserror::Error;

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

pub use commands::{
    all_tables, cmd_bench, cmd_constellations, cmd_gaps, cmd_selberg, load_patterns, write_table,
};
pub use config::ExperimentConfig;
pub use table::Table;
pub use verify::{cmd_verify, compare, Mismatch, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}: field `{field}`: {message}")]
    Config {
        origin: String,
        line: usize,
        field: String,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Pattern {
        path: PathBuf,
        source: gapweak::Error,
    },
    #[error(transparent)]
    Core(#[from] gapweak::Error),
}
