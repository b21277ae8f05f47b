//! Text formats: graph files, Newick trees with a color sidecar, DOT renders and triple lists.

use thiserror::Error;

mod dot;
mod graph_file;
mod newick;
mod triples_text;

pub use dot::write_dot;
pub use graph_file::{parse_graph, write_graph};
pub use newick::{parse_color_map, parse_newick, read_tree, write_color_map, write_newick, ColorEntry, NewickNode};
pub use triples_text::{parse_triples, write_triples};

/// Parse failure with a 1-based position. Line 0 marks a whole-input problem.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected token `{0}`")]
    Unexpected(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("vertex `{0}` is not declared")]
    UndeclaredVertex(String),
    #[error("arc `{0}` -> `{1}` declared twice")]
    DuplicateArc(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("input declares no vertices")]
    Empty,
    #[error("branch lengths are not supported")]
    BranchLength,
    #[error("leaf `{0}` occurs twice")]
    DuplicateLeaf(String),
    #[error("leaf `{0}` has no color")]
    MissingColor(String),
    #[error("color given for unknown leaf `{0}`")]
    UnknownLeaf(String),
    #[error("leaf `{0}` colored twice")]
    DuplicateColor(String),
    #[error("empty subtree")]
    EmptySubtree,
}

/// Failure reading a Newick tree together with its color sidecar.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeFileError {
    #[error("tree {0}")]
    Tree(ParseError),
    #[error("colors {0}")]
    Colors(ParseError),
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, col, kind }
    }
}

/// Whitespace-separated tokens of a line with 1-based character columns; stops at `#`.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch == '#' && start.is_none() {
            return out;
        }
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c + 1, &line[b..byte]));
            }
        } else if start.is_none() {
            start = Some((col, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &line[b..]));
    }
    out
}
