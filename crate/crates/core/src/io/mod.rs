//! Readers and writers for the on-disk graph and trace formats.

mod dot;
mod edge_list;
mod twitter15;

pub use dot::export_dot;
pub use edge_list::{parse_edge_list, tree_to_edge_list, write_edge_list};
pub use twitter15::{load_twitter15_corpus, parse_twitter15_trace, CorpusEntry, Twitter15Trace};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: non-positive cost {cost}")]
    NonPositiveCost { line: usize, cost: f64 },
    #[error("line {line}: self-loop on {node}")]
    SelfLoop { line: usize, node: String },
    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge {
        line: usize,
        src: String,
        dst: String,
    },
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: malformed trace triple: {reason}")]
    MalformedTriple { line: usize, reason: String },
    #[error("line {line}: child time {child} precedes parent time {parent}")]
    NegativeLatency {
        line: usize,
        parent: f64,
        child: f64,
    },
    #[error("trace has no ROOT line")]
    MissingRoot,
    #[error("line {line}: second ROOT line declares {node}, root already set")]
    MultipleRoots { line: usize, node: String },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<ParseError>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ParseError {
    /// 1-based line number the error refers to, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::NonPositiveCost { line, .. }
            | ParseError::SelfLoop { line, .. }
            | ParseError::DuplicateEdge { line, .. }
            | ParseError::MalformedLine { line, .. }
            | ParseError::MalformedTriple { line, .. }
            | ParseError::NegativeLatency { line, .. }
            | ParseError::MultipleRoots { line, .. } => Some(*line),
            ParseError::InFile { source, .. } => source.line(),
            ParseError::MissingRoot | ParseError::Io { .. } => None,
        }
    }

    fn from_graph(line: usize, err: GraphError) -> Self {
        match err {
            GraphError::NonPositiveCost { cost, .. } => ParseError::NonPositiveCost { line, cost },
            GraphError::SelfLoop(node) => ParseError::SelfLoop { line, node },
            GraphError::DuplicateEdge { src, dst } => ParseError::DuplicateEdge { line, src, dst },
        }
    }
}

/// Formats a float so that it re-parses to the identical value and always
/// carries a decimal point (`1.0`, not `1`).
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}
