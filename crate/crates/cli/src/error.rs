use serde_json::json;

use padic_rank_one::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid field {field}: {reason}")]
    Validation { field: String, reason: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Module(#[from] Error),
}

impl CliError {
    pub fn validation(field: &str, reason: impl Into<String>) -> Self {
        CliError::Validation { field: field.into(), reason: reason.into() }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Validation { .. } => "ValidationError",
            CliError::Io(_) => "IoError",
            CliError::Module(e) => e.code(),
        }
    }

    /// 2 for unusable input, 1 for failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Module(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"error": {"code": self.code(), "message": self.to_string()}})
    }
}
