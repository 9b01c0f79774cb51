use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error(transparent)]
    Core(#[from] tensorgap::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn field(field: impl Into<String>, message: impl std::fmt::Display) -> Self {
        CliError::Field { field: field.into(), message: message.to_string() }
    }

    pub(crate) fn syntax(e: serde_json::Error) -> Self {
        CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }

    /// Exit status: 2 for anything the caller got wrong, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(tensorgap::Error::Inconsistency(_)) => 1,
            CliError::Core(tensorgap::Error::InconclusiveGenericity { .. } | tensorgap::Error::BudgetExhausted { .. }) => 1,
            _ => 2,
        }
    }
}
