use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use super::{tokens, ParseError, ParseErrorKind, TreeFileError};
use crate::ids::Labels;
use crate::tree::{LeafColoredTree, Topology};

/// Parsed Newick tree; leaves keep the position of their label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NewickNode {
    Leaf { name: String, line: usize, col: usize },
    Inner(Vec<NewickNode>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorEntry {
    pub leaf: String,
    pub color: String,
    pub line: usize,
    pub col: usize,
}

const RESERVED: &[char] = &['(', ')', ',', ';', ':', '[', ']', '\''];

/// Rooted Newick without branch lengths or inner labels; `'quoted'` leaf names are allowed.
pub fn parse_newick(text: &str) -> Result<NewickNode, ParseError> {
    let mut chars = Vec::new();
    let (mut line, mut col) = (1, 1);
    for ch in text.chars() {
        chars.push((line, col, ch));
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    let eof = (line, col);
    let err = |(l, c): (usize, usize), kind| ParseError::new(l, c, kind);

    let mut open: Vec<Vec<NewickNode>> = Vec::new();
    let mut root: Option<NewickNode> = None;
    let mut expect_item = true;
    let mut i = 0;
    let attach = |node: NewickNode, open: &mut Vec<Vec<NewickNode>>, root: &mut Option<NewickNode>, at| {
        match open.last_mut() {
            Some(frame) => frame.push(node),
            None if root.is_none() => *root = Some(node),
            None => return Err(err(at, ParseErrorKind::Expected("`;`"))),
        }
        Ok(())
    };
    while i < chars.len() {
        let (l, c, ch) = chars[i];
        let at = (l, c);
        match ch {
            _ if ch.is_whitespace() => i += 1,
            '(' => {
                if !expect_item {
                    return Err(err(at, ParseErrorKind::Unexpected("(".into())));
                }
                open.push(Vec::new());
                i += 1;
            }
            ',' => {
                if expect_item {
                    return Err(err(at, ParseErrorKind::EmptySubtree));
                }
                if open.is_empty() {
                    return Err(err(at, ParseErrorKind::Unexpected(",".into())));
                }
                expect_item = true;
                i += 1;
            }
            ')' => {
                if expect_item {
                    return Err(err(at, ParseErrorKind::EmptySubtree));
                }
                let kids = open.pop().ok_or_else(|| err(at, ParseErrorKind::Unexpected(")".into())))?;
                attach(NewickNode::Inner(kids), &mut open, &mut root, at)?;
                expect_item = false;
                i += 1;
            }
            ';' => {
                if !open.is_empty() {
                    return Err(err(at, ParseErrorKind::Expected("`)`")));
                }
                if root.is_none() {
                    return Err(err(at, ParseErrorKind::EmptySubtree));
                }
                if let Some(&(l, c, ch)) = chars[i + 1..].iter().find(|p| !p.2.is_whitespace()) {
                    return Err(err((l, c), ParseErrorKind::Unexpected(ch.to_string())));
                }
                return Ok(root.unwrap());
            }
            ':' => return Err(err(at, ParseErrorKind::BranchLength)),
            '[' | ']' => return Err(err(at, ParseErrorKind::Unexpected(ch.to_string()))),
            _ => {
                let mut name = String::new();
                if ch == '\'' {
                    i += 1;
                    loop {
                        match chars.get(i) {
                            None => return Err(err(eof, ParseErrorKind::Expected("closing quote"))),
                            Some(&(_, _, '\'')) if chars.get(i + 1).map(|p| p.2) == Some('\'') => {
                                name.push('\'');
                                i += 2;
                            }
                            Some(&(_, _, '\'')) => {
                                i += 1;
                                break;
                            }
                            Some(&(_, _, q)) => {
                                name.push(q);
                                i += 1;
                            }
                        }
                    }
                } else {
                    while let Some(&(_, _, q)) = chars.get(i) {
                        if q.is_whitespace() || RESERVED.contains(&q) {
                            break;
                        }
                        name.push(q);
                        i += 1;
                    }
                }
                if !expect_item {
                    // a label after `)` names an inner node
                    return Err(err(at, ParseErrorKind::Unexpected(name)));
                }
                if name.is_empty() {
                    return Err(err(at, ParseErrorKind::EmptySubtree));
                }
                attach(NewickNode::Leaf { name, line: l, col: c }, &mut open, &mut root, at)?;
                expect_item = false;
            }
        }
    }
    Err(err(eof, ParseErrorKind::Expected("`;`")))
}

/// Sidecar lines `<leaf><TAB><color>`; without a TAB the two fields are split on whitespace.
/// `#` starts a comment.
pub fn parse_color_map(text: &str) -> Result<Vec<ColorEntry>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        if let Some((leaf, rest)) = content.split_once('\t') {
            let color = tokens(rest);
            let rest_col = leaf.chars().count() + 2;
            match color.as_slice() {
                _ if leaf.trim().is_empty() => {
                    return Err(ParseError::new(k + 1, 1, ParseErrorKind::Expected("<leaf> <color>")))
                }
                [(_, c)] => out.push(ColorEntry {
                    leaf: leaf.to_string(),
                    color: c.to_string(),
                    line: k + 1,
                    col: 1,
                }),
                [] => {
                    return Err(ParseError::new(
                        k + 1,
                        line.chars().count() + 1,
                        ParseErrorKind::Expected("<color>"),
                    ))
                }
                [_, (c, t), ..] => {
                    return Err(ParseError::new(k + 1, rest_col + c - 1, ParseErrorKind::Unexpected(t.to_string())))
                }
            }
            continue;
        }
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            [(c, leaf), (_, color)] => out.push(ColorEntry {
                leaf: leaf.to_string(),
                color: color.to_string(),
                line: k + 1,
                col: *c,
            }),
            [_] => {
                return Err(ParseError::new(
                    k + 1,
                    line.chars().count() + 1,
                    ParseErrorKind::Expected("<leaf> <color>"),
                ))
            }
            [_, _, (c, t), ..] => return Err(ParseError::new(k + 1, *c, ParseErrorKind::Unexpected(t.to_string()))),
        }
    }
    Ok(out)
}

/// Tree from Newick text and its color sidecar; the map must cover exactly the leaves.
pub fn read_tree(newick: &str, colors: &str) -> Result<LeafColoredTree, TreeFileError> {
    let root = parse_newick(newick).map_err(TreeFileError::Tree)?;
    let entries = parse_color_map(colors).map_err(TreeFileError::Colors)?;

    let mut leaves: Vec<(&str, usize, usize)> = Vec::new();
    let mut stack = vec![&root];
    while let Some(n) = stack.pop() {
        match n {
            NewickNode::Leaf { name, line, col } => leaves.push((name, *line, *col)),
            NewickNode::Inner(kids) => stack.extend(kids.iter().rev()),
        }
    }
    let mut first: HashMap<&str, ()> = HashMap::new();
    for &(name, line, col) in &leaves {
        if first.insert(name, ()).is_some() {
            return Err(TreeFileError::Tree(ParseError::new(line, col, ParseErrorKind::DuplicateLeaf(name.into()))));
        }
    }
    let mut color_of: HashMap<&str, &str> = HashMap::new();
    for e in &entries {
        if !first.contains_key(e.leaf.as_str()) {
            return Err(TreeFileError::Colors(ParseError::new(
                e.line,
                e.col,
                ParseErrorKind::UnknownLeaf(e.leaf.clone()),
            )));
        }
        if color_of.insert(&e.leaf, &e.color).is_some() {
            return Err(TreeFileError::Colors(ParseError::new(
                e.line,
                e.col,
                ParseErrorKind::DuplicateColor(e.leaf.clone()),
            )));
        }
    }
    if let Some(&(name, line, col)) = leaves.iter().find(|l| !color_of.contains_key(l.0)) {
        return Err(TreeFileError::Tree(ParseError::new(line, col, ParseErrorKind::MissingColor(name.into()))));
    }

    let labels = Arc::new(Labels::new(leaves.iter().map(|l| l.0), color_of.values().copied()));
    let topology = to_topology(&root, &labels);
    let tree = LeafColoredTree::new(labels.clone(), &topology, |v| {
        color_of.get(labels.vertex_name(v)).and_then(|c| labels.color(c))
    })
    .expect("leaves and colors were validated");
    Ok(tree)
}

fn to_topology(root: &NewickNode, labels: &Labels) -> Topology {
    match root {
        NewickNode::Leaf { name, .. } => Topology::Leaf(labels.vertex(name).unwrap()),
        NewickNode::Inner(kids) => Topology::Inner(kids.iter().map(|k| to_topology(k, labels)).collect()),
    }
}

fn quoted(name: &str) -> String {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Canonical Newick of `tree` followed by a newline.
pub fn write_newick(tree: &LeafColoredTree) -> String {
    let labels = tree.labels();
    let mut s = String::new();
    let mut stack = vec![(tree.root(), 0usize)];
    while let Some(top) = stack.last_mut() {
        let (u, k) = *top;
        if let Some(v) = tree.leaf_vertex(u) {
            s.push_str(&quoted(labels.vertex_name(v)));
            stack.pop();
            continue;
        }
        let kids = tree.children(u);
        if k == kids.len() {
            s.push(')');
            stack.pop();
            continue;
        }
        s.push(if k == 0 { '(' } else { ',' });
        top.1 += 1;
        stack.push((kids[k], 0));
    }
    s.push_str(";\n");
    s
}

/// Sidecar lines `<leaf>\t<color>` in leaf id order.
pub fn write_color_map(tree: &LeafColoredTree) -> String {
    let labels = tree.labels();
    let mut s = String::new();
    for (v, c) in tree.coloring() {
        writeln!(s, "{}\t{}", labels.vertex_name(v), labels.color_name(c)).unwrap();
    }
    s
}
