use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("malformed configuration: {0}")]
    Parse(String),

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] qhj::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "ParseError",
            CliError::Validation { .. } => "ValidationError",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.name(),
        }
    }

    /// `{"error": <name>, "message": ...}`, plus the offending field for
    /// validation failures.
    pub fn document(&self) -> Value {
        let mut doc = json!({ "error": self.name(), "message": self.to_string() });
        if let CliError::Validation { field, .. } = self {
            doc["field"] = Value::String(field.clone());
        }
        doc
    }
}
