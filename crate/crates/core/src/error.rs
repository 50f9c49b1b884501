use std::path::PathBuf;

use thiserror::Error;

/// Invalid or unreadable configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: `{value}` is not a valid value for `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("line {line}: expected `name = number`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("world is terminal; no further steps are allowed")]
    Terminal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenomeError {
    #[error("connection {column} references unknown node {node}")]
    UnknownNode { column: usize, node: u32 },
    #[error("connection {column} has enabled value {value}, expected 0 or 1")]
    EnabledOutOfRange { column: usize, value: i64 },
    #[error("connection {column} duplicates edge {from}->{to}")]
    DuplicateEdge { column: usize, from: u32, to: u32 },
    #[error("connection {column} is a self-loop on node {node}")]
    SelfLoop { column: usize, node: u32 },
    #[error("connection {column} enters input node {node}")]
    IntoInput { column: usize, node: u32 },
    #[error("connection {column} leaves output node {node}")]
    FromOutput { column: usize, node: u32 },
    #[error("duplicate node id {0}")]
    DuplicateNode(u32),
    #[error("expected {expected} {role} nodes, found {found}")]
    NodeCount {
        role: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("enabled connections form a cycle")]
    Cycle,
    #[error("table rows have mismatched lengths")]
    RaggedTable,
}

/// Malformed genome or chromosome text.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing `{0}` row")]
    MissingRow(&'static str),
    #[error(transparent)]
    Genome(#[from] GenomeError),
}
