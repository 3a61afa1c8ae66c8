use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("type error: {0}")]
    Type(String),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("invalid JSON: {0}")]
    JsonSyntax(String),

    #[error(transparent)]
    Core(#[from] catnf::Error),
}

impl CliError {
    /// 2 for problems with the invocation or its input text, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::UnboundVariable(_)
            | CliError::Type(_)
            | CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::JsonSyntax(_) => 2,
            CliError::Core(_) => 1,
        }
    }

    /// One-line machine-readable diagnostic.
    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Parse { .. } => "parse",
            CliError::UnboundVariable(_) => "unbound_variable",
            CliError::Type(_) => "type",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::JsonSyntax(_) => "json_syntax",
            CliError::Core(e) => match e {
                catnf::Error::BadNode { .. } => "bad_node",
                catnf::Error::Json { .. } => "json_schema",
                catnf::Error::InvalidCert(_) => "invalid_cert",
                catnf::Error::TypeMismatch(_) => "type_mismatch",
                catnf::Error::CtxtMismatch(_) => "ctxt_mismatch",
                catnf::Error::IndexOutOfRange { .. } => "index_out_of_range",
                catnf::Error::BudgetExceeded(_) => "budget_exceeded",
                catnf::Error::FuelExhausted => "fuel_exhausted",
            },
        };
        let mut v = json!({ "error": kind, "message": self.to_string() });
        match self {
            CliError::Parse { line, col, .. } => {
                v["line"] = json!(line);
                v["col"] = json!(col);
            }
            CliError::Core(catnf::Error::BadNode { path, .. }) | CliError::Core(catnf::Error::Json { path, .. }) => {
                v["path"] = json!(path);
            }
            _ => {}
        }
        v
    }
}
