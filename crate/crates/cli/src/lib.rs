//! Configuration loading and output writers for the `lightspeed` command.
//!
//! Every writer embeds a [`Provenance`] block and formats numbers with nine
//! significant digits, so identical inputs give byte-identical files.

mod config;
mod emit;

use std::path::PathBuf;

pub use config::{Format, RunConfig, DEFAULT_SEED};
pub use emit::{
    emit_fieldmap, emit_report, emit_table, emit_tradeoff, parse_fieldmap_json, round_sig,
    write_output, FieldMapDocument, FieldRow, Provenance, TableDocument, TableEntry,
    TradeoffPoint, FIELD_COLUMNS, TRADEOFF_COLUMNS,
};

/// Exit status for a bad or unreadable configuration.
pub const EXIT_INVALID_CONFIG: u8 = 2;
/// Exit status for a regime violation under `--strict`.
pub const EXIT_REGIME: u8 = 3;
/// Exit status when quadrature misses its tolerance.
pub const EXIT_QUADRATURE: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] lightspeed::Error),

    #[error("format {format:?} is not available for {what}")]
    UnsupportedFormat { format: Format, what: &'static str },

    #[error("field map is missing component {0}")]
    MissingComponent(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        use lightspeed::Error as E;
        match self {
            CliError::Config(_) | CliError::UnsupportedFormat { .. } => EXIT_INVALID_CONFIG,
            CliError::Core(
                E::InvalidConfig(_)
                | E::InvalidMode { .. }
                | E::InvalidArgument(_)
                | E::InvalidGrid(_)
                | E::SingularKernel { .. },
            ) => EXIT_INVALID_CONFIG,
            CliError::Io { .. } | CliError::Json(_) | CliError::MissingComponent(_) => 1,
            CliError::Core(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
