//! Graphviz export of a model with test paths drawn over it.

use std::fmt::Write;

use crate::model::{Graph, TestPath};

const PALETTE: [&str; 10] = [
    "blue", "magenta", "darkgreen", "purple", "brown", "cyan4", "gold3", "deeppink", "navy", "olivedrab",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `graph` as a DOT digraph.
///
/// Test starts are filled green, test ends red, and vertices that are both
/// orange. Each path gets its own color; an edge traversed by several paths
/// is drawn with a `colorList` of all of them.
pub fn export_dot(graph: &Graph, paths: &[TestPath]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&graph.name)).unwrap();
    writeln!(out, "  node [shape=ellipse, style=filled, fillcolor=white];").unwrap();
    for v in graph.vertex_ids() {
        let vertex = graph.vertex(v);
        let fill = match (graph.test_starts.contains(&v), graph.test_ends.contains(&v)) {
            (true, true) => "orange",
            (true, false) => "green",
            (false, true) => "red",
            (false, false) => "white",
        };
        let shape = if v == graph.start { ", shape=doublecircle" } else { "" };
        writeln!(
            out,
            "  {} [label={}, fillcolor={fill}{shape}];",
            quote(&vertex.name),
            quote(&format!("{} ({})", vertex.name, vertex.priority))
        )
        .unwrap();
    }

    let mut colors: Vec<Vec<&str>> = vec![Vec::new(); graph.edges.len()];
    for (i, p) in paths.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for e in p.edges() {
            if !colors[e.0].contains(&color) {
                colors[e.0].push(color);
            }
        }
    }
    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        let style = match colors[e.0].as_slice() {
            [] => "color=black".to_owned(),
            cs => format!("color={}, penwidth=2", quote(&cs.join(":"))),
        };
        writeln!(
            out,
            "  {} -> {} [label={}, {style}];",
            quote(&graph.vertex(edge.source).name),
            quote(&graph.vertex(edge.target).name),
            quote(&format!("{} ({})", edge.label, edge.priority)),
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
