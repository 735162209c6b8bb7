use std::fmt::Write as _;

use super::fmt_f64;
use crate::arborescence::PropagationTree;
use crate::ranking::HarmReport;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Graphviz rendering of a tree. Nodes come out in dense-index order, each
/// labelled with its id and rank (4 decimals); edges carry their cost.
pub fn export_dot(tree: &PropagationTree, report: &HarmReport) -> String {
    let mut out = String::from("digraph propagation_tree {\n");
    for v in tree.members() {
        let label = match report.score(v) {
            Some(s) => format!("{}\\n{:.4}", escape(tree.id(v)), s.rank),
            None => escape(tree.id(v)),
        };
        let _ = writeln!(out, "  {} [label=\"{label}\"];", quote(tree.id(v)));
    }
    for (p, v, cost) in tree.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            quote(tree.id(p)),
            quote(tree.id(v)),
            fmt_f64(cost)
        );
    }
    out.push_str("}\n");
    out
}
