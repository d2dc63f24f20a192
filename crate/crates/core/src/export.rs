//! DOT and JSON renderings of attack graphs and extension families.
//! Output depends only on the graph, so it is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::arguments::{Argument, AttackGraph};
use crate::semantics::Extension;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_dot(graph: &AttackGraph) -> String {
    let mut out = String::from("digraph attacks {\n  node [shape=box];\n");
    for a in &graph.arguments {
        let _ = writeln!(out, "  a{} [label=\"{}\"];", a.id, escape(&a.to_string()));
    }
    for (from, to) in &graph.edges {
        let _ = writeln!(out, "  a{from} -> a{to};");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct Document<'a> {
    arguments: &'a [Argument],
    edges: &'a [(usize, usize)],
    extensions: BTreeMap<&'static str, Vec<Vec<usize>>>,
}

/// `{arguments, edges, extensions: {sem: [[ids]]}}`, pretty-printed with a
/// trailing newline.
pub fn export_json(
    graph: &AttackGraph,
    families: &[(crate::semantics::Semantics, Vec<Extension>)],
) -> String {
    let mut extensions = BTreeMap::new();
    for (sem, exts) in families {
        let mut sets: Vec<Vec<usize>> = exts
            .iter()
            .map(|e| e.members.iter().copied().collect())
            .collect();
        sets.sort();
        extensions.insert(sem.name(), sets);
    }
    let doc = Document {
        arguments: &graph.arguments,
        edges: &graph.edges,
        extensions,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}
