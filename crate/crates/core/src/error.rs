use std::path::PathBuf;

use crate::model::{ClassIndex, LspId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid class configuration: {0}")]
    Config(String),

    #[error("class index {class} out of range for {class_count} classes")]
    InvalidClass { class: ClassIndex, class_count: usize },

    #[error("invalid request {id}: {reason}")]
    InvalidRequest { id: LspId, reason: String },

    #[error("unknown LSP id {0}")]
    UnknownLsp(LspId),

    #[error("stale decision for request {id}: {reason}")]
    StaleDecision { id: LspId, reason: String },

    #[error("invariant violation after event {event_index}: {}", join_violations(.violations))]
    InvariantViolation {
        event_index: usize,
        violations: Vec<Violation>,
    },

    #[error("invalid scenario: {path}: {message}")]
    Scenario { path: String, message: String },

    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("{}: row {line}: {message}", .path.display())]
    Report { path: PathBuf, line: u64, message: String },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
