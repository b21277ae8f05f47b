use std::collections::{HashMap, HashSet};
use std::fmt::Write;
use std::sync::Arc;

use super::{tokens, ParseError, ParseErrorKind};
use crate::graph::ColoredDigraph;
use crate::ids::Labels;

/// Reads `V <id> <color>` and `A <src> <dst>` lines; arc endpoints must be declared earlier.
pub fn parse_graph(text: &str) -> Result<ColoredDigraph, ParseError> {
    let mut vertices: Vec<(String, String)> = Vec::new();
    let mut declared: HashMap<String, usize> = HashMap::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut seen_arcs: HashSet<(usize, usize)> = HashSet::new();
    let mut last_line = 0;
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        last_line = ln;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let err = |col, kind| ParseError::new(ln, col, kind);
        let end = line.chars().count() + 1;
        match head {
            "V" | "A" => {
                let what = if head == "V" { "<id> <color>" } else { "<src> <dst>" };
                if toks.len() < 3 {
                    return Err(err(end, ParseErrorKind::Expected(what)));
                }
                if let Some(&(c, t)) = toks.get(3) {
                    return Err(err(c, ParseErrorKind::Unexpected(t.to_string())));
                }
                let (c1, a) = toks[1];
                let (c2, b) = toks[2];
                if head == "V" {
                    if declared.contains_key(a) {
                        return Err(err(c1, ParseErrorKind::DuplicateVertex(a.to_string())));
                    }
                    declared.insert(a.to_string(), vertices.len());
                    vertices.push((a.to_string(), b.to_string()));
                } else {
                    let i = *declared
                        .get(a)
                        .ok_or_else(|| err(c1, ParseErrorKind::UndeclaredVertex(a.to_string())))?;
                    let j = *declared
                        .get(b)
                        .ok_or_else(|| err(c2, ParseErrorKind::UndeclaredVertex(b.to_string())))?;
                    if i == j {
                        return Err(err(c2, ParseErrorKind::SelfLoop(a.to_string())));
                    }
                    if !seen_arcs.insert((i, j)) {
                        return Err(err(col, ParseErrorKind::DuplicateArc(a.to_string(), b.to_string())));
                    }
                    arcs.push((i, j));
                }
            }
            other => return Err(err(col, ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    if vertices.is_empty() {
        return Err(ParseError::new(last_line.max(1), 1, ParseErrorKind::Empty));
    }
    let labels = Arc::new(Labels::new(
        vertices.iter().map(|v| v.0.as_str()),
        vertices.iter().map(|v| v.1.as_str()),
    ));
    let vid: Vec<_> = vertices.iter().map(|v| labels.vertex(&v.0).unwrap()).collect();
    let vs = vertices
        .iter()
        .zip(&vid)
        .map(|(v, &id)| (id, labels.color(&v.1).unwrap()))
        .collect();
    let g = ColoredDigraph::new(labels, vs, arcs.iter().map(|&(i, j)| (vid[i], vid[j])))
        .expect("declarations were validated line by line");
    Ok(g)
}

/// Vertices in id order, then arcs in lexicographic (source, target) order.
pub fn write_graph(g: &ColoredDigraph) -> String {
    let labels = g.labels();
    let mut s = String::new();
    for i in 0..g.len() {
        writeln!(s, "V {} {}", g.name(i), labels.color_name(g.color(i))).unwrap();
    }
    for (i, j) in g.arcs() {
        writeln!(s, "A {} {}", g.name(i), g.name(j)).unwrap();
    }
    s
}
