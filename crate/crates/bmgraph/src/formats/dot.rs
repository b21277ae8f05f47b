use std::fmt::Write;

use crate::graph::ColoredDigraph;

const PALETTE: &[&str] = &[
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf", "#999999",
];

fn escaped(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz render; vertices are filled by color rank and reciprocal arcs become one undirected line.
pub fn write_dot(g: &ColoredDigraph) -> String {
    let labels = g.labels();
    let palette = g.color_set();
    let mut s = String::from("digraph bmg {\n  node [style=filled];\n");
    for i in 0..g.len() {
        let rank = palette.binary_search(&g.color(i)).unwrap();
        writeln!(
            s,
            "  \"{}\" [fillcolor=\"{}\", tooltip=\"{}\"];",
            escaped(g.name(i)),
            PALETTE[rank % PALETTE.len()],
            escaped(labels.color_name(g.color(i)))
        )
        .unwrap();
    }
    for (i, j) in g.arcs() {
        if g.has_arc(j, i) {
            if i < j {
                writeln!(s, "  \"{}\" -> \"{}\" [dir=none];", escaped(g.name(i)), escaped(g.name(j))).unwrap();
            }
        } else {
            writeln!(s, "  \"{}\" -> \"{}\";", escaped(g.name(i)), escaped(g.name(j))).unwrap();
        }
    }
    s.push_str("}\n");
    s
}
