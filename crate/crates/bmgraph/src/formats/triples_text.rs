use std::fmt::Write;

use super::{tokens, ParseError, ParseErrorKind};
use crate::ids::{Labels, VertexId};
use crate::triples::{RootedTriple, TripleSet};

/// One `x y | z` line per triple in canonical order.
pub fn write_triples(set: &TripleSet, labels: &Labels) -> String {
    let mut s = String::new();
    for t in set.iter() {
        writeln!(
            s,
            "{} {} | {}",
            labels.vertex_name(t.x),
            labels.vertex_name(t.y),
            labels.vertex_name(t.z)
        )
        .unwrap();
    }
    s
}

/// Reads `x y | z` lines over known vertex names.
pub fn parse_triples(text: &str, labels: &Labels) -> Result<Vec<RootedTriple>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 4 || toks[2].1 != "|" {
            let col = toks.get(2).map_or(line.chars().count() + 1, |t| t.0);
            return Err(ParseError::new(ln, col, ParseErrorKind::Expected("`x y | z`")));
        }
        let id = |(col, name): (usize, &str)| -> Result<VertexId, ParseError> {
            labels
                .vertex(name)
                .ok_or_else(|| ParseError::new(ln, col, ParseErrorKind::UndeclaredVertex(name.to_string())))
        };
        out.push(RootedTriple::new(id(toks[0])?, id(toks[1])?, id(toks[3])?));
    }
    Ok(out)
}
