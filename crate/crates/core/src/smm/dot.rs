//! Graphviz snapshots of a live machine.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::SmmMachine;

#[derive(Debug, Clone, Default)]
pub struct DotOptions {
    /// Direction names whose edges are left out of the drawing.
    pub omit: BTreeSet<String>,
}

impl DotOptions {
    pub fn omitting<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        DotOptions {
            omit: names.into_iter().map(str::to_owned).collect(),
        }
    }
}

/// Renders `machine` as a DOT digraph. Nodes come in id order and edges in
/// direction declaration order; the center is filled gray.
pub fn to_dot(machine: &SmmMachine, options: &DotOptions) -> String {
    let mut out = String::from("digraph smm {\n");
    for (id, node) in machine.nodes() {
        let _ = write!(out, "  {id} [label=\"{}\"", escape(&node.label));
        if machine.center() == Some(id) {
            out.push_str(", style=filled, fillcolor=gray");
        }
        out.push_str("];\n");
    }
    for (id, node) in machine.nodes() {
        for (dir, target) in machine.directions().iter().zip(&node.edges) {
            if options.omit.contains(dir.as_str()) {
                continue;
            }
            let _ = writeln!(
                out,
                "  {id} -> {target} [label=\"{}\"];",
                escape(dir.as_str())
            );
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
