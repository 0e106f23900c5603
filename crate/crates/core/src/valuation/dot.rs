use std::fmt::Write;

use crate::valuation::{PermissibleTree, ValuationGraph};

fn vertex_label(graph: &ValuationGraph, v: usize) -> String {
    match graph.labels() {
        Some(labels) => labels[v].to_string(),
        None => v.to_string(),
    }
}

/// Complete weighted graph in DOT; every edge carries a `weight` attribute.
pub fn graph_to_dot(graph: &ValuationGraph) -> String {
    let mut out = String::from("graph valuation {\n");
    for v in 0..graph.g() {
        let _ = writeln!(out, "  {v} [label=\"{}\"];", vertex_label(graph, v));
    }
    for (i, j) in graph.weights().pairs() {
        let w = graph.weight(i, j);
        let _ = writeln!(out, "  {i} -- {j} [weight={w}, label=\"{w}\"];");
    }
    out.push_str("}\n");
    out
}

/// Permissible tree in DOT; edges also record their linked cell index.
pub fn tree_to_dot(graph: &ValuationGraph, tree: &PermissibleTree) -> String {
    let mut out = String::from("graph permissible_tree {\n");
    for v in 0..tree.g() {
        let _ = writeln!(out, "  {v} [label=\"{}\"];", vertex_label(graph, v));
    }
    for (idx, e) in tree.edges().iter().enumerate() {
        let cell = tree
            .cells()
            .iter()
            .position(|c| c.edges.contains(&idx))
            .expect("every tree edge lies in a cell");
        let _ = writeln!(
            out,
            "  {} -- {} [weight={}, cell={cell}, label=\"{}\"];",
            e.u, e.v, e.weight, e.weight
        );
    }
    out.push_str("}\n");
    out
}
