//! Command-line front end for `mirrorseidel`: fan and series documents,
//! command dispatch and deterministic reports.

pub mod commands;
pub mod input;
pub mod series_io;

pub use commands::{run, Command, CommandSpec, InputSource, OutputFormat};
pub use input::{parse_input, render_input};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    /// Malformed JSON, with a 1-based position.
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    /// Well-formed JSON that does not fit the schema; names the offending key.
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Library(#[from] mirrorseidel::Error),
    /// The round trip finished but some stage disagrees with the forward pass.
    #[error("{0}")]
    Residual(String),
}

impl CliError {
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Schema(_) => "SchemaError",
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Library(e) => e.name(),
            CliError::Residual(_) => "RoundtripResidual",
        }
    }

    /// 1 for failures of the computation itself, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(_) | CliError::Residual(_) => 1,
            _ => 2,
        }
    }
}
