use std::fmt;

use thiserror::Error;

/// Errors raised while reading ARFF / Mulan XML documents.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    /// Malformed header or data row.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    /// A label declared in the XML header (or by a MEKA `-C` option) does not
    /// match the ARFF attribute list.
    #[error("schema error: {0}")]
    Schema(String),

    /// A label attribute carried something other than 0/1/true/false.
    #[error("line {line}: label `{label}` has value `{value}`, expected one of 0, 1, true, false")]
    LabelValue { line: usize, label: String, value: String },

    #[error("xml error: {0}")]
    Xml(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }

    /// Line number the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::LabelValue { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Invalid argument passed to an operation (empty input, mismatched label
/// spaces, degenerate splits, ...).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ArgumentError(pub String);

impl ArgumentError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        ArgumentError(msg.into())
    }
}

/// One rejected row of a published-results or baselines CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Errors from the result registry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegistryError {
    #[error("{} invalid row(s):\n{}", .0.len(), join_lines(.0))]
    Rows(Vec<RowError>),

    /// Published results whose (dataset, measure) has no baseline value.
    #[error("no baseline for: {}", .0.join(", "))]
    MissingBaseline(Vec<String>),
}

fn join_lines(rows: &[RowError]) -> String {
    rows.iter().map(|r| format!("  {r}")).collect::<Vec<_>>().join("\n")
}

/// Top-level error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Argument(#[from] ArgumentError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
