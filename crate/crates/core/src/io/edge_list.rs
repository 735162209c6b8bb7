use std::fmt::Write as _;

use super::{fmt_f64, ParseError};
use crate::arborescence::PropagationTree;
use crate::graph::{GraphBuilder, WeightedDigraph};

/// Parses `src dst cost` lines. `#` starts a comment anywhere on a line,
/// blank lines are skipped, and both LF and CRLF endings are accepted.
pub fn parse_edge_list(text: &str) -> Result<WeightedDigraph, ParseError> {
    let mut builder = GraphBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [src, dst, cost] = fields[..] else {
            return Err(ParseError::MalformedLine {
                line,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        };
        let cost: f64 = cost.parse().map_err(|_| ParseError::MalformedLine {
            line,
            reason: format!("cost {cost:?} is not a number"),
        })?;
        builder
            .add_edge(src, dst, cost)
            .map_err(|e| ParseError::from_graph(line, e))?;
    }
    Ok(builder.build())
}

/// Serializes every edge as `src dst cost`, grouped by source in dense-index
/// order. Isolated nodes have no representation in this format.
pub fn write_edge_list(graph: &WeightedDigraph) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        let _ = writeln!(
            out,
            "{} {} {}",
            graph.id(e.src),
            graph.id(e.dst),
            fmt_f64(e.cost)
        );
    }
    out
}

/// Tree edges as an edge list, with the cumulative root distance of each
/// child carried in a trailing comment so the file still parses as a graph.
pub fn tree_to_edge_list(tree: &PropagationTree) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# root {}", tree.id(tree.root()));
    for v in tree.members() {
        if let Some((p, cost)) = tree.parent(v) {
            let _ = writeln!(
                out,
                "{} {} {} # dist={}",
                tree.id(p),
                tree.id(v),
                fmt_f64(cost),
                fmt_f64(tree.dist(v).unwrap_or(f64::NAN))
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_list() {
        let g = parse_edge_list("a b 1.5\nb c 2.0").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let (a, b) = (g.node("a").unwrap(), g.node("b").unwrap());
        assert_eq!(g.cost(a, b), Some(1.5));
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let g = parse_edge_list("# header\r\na b 1 # trailing\r\n\r\n  \nb c 2\r\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_edge_list("a a 1.0").unwrap_err();
        assert!(matches!(e, ParseError::SelfLoop { line: 1, .. }), "{e}");
        let e = parse_edge_list("a b 0").unwrap_err();
        assert!(
            matches!(e, ParseError::NonPositiveCost { line: 1, .. }),
            "{e}"
        );
        let e = parse_edge_list("a b 1\n# c\nb c -2").unwrap_err();
        assert!(
            matches!(e, ParseError::NonPositiveCost { line: 3, .. }),
            "{e}"
        );
        let e = parse_edge_list("a b 1\na b 2").unwrap_err();
        assert!(
            matches!(e, ParseError::DuplicateEdge { line: 2, .. }),
            "{e}"
        );
        let e = parse_edge_list("a b").unwrap_err();
        assert!(
            matches!(e, ParseError::MalformedLine { line: 1, .. }),
            "{e}"
        );
        let e = parse_edge_list("a b 1\nx y fast").unwrap_err();
        assert!(
            matches!(e, ParseError::MalformedLine { line: 2, .. }),
            "{e}"
        );
        let e = parse_edge_list("a b 1 9").unwrap_err();
        assert_eq!(e.line(), Some(1));
    }

    #[test]
    fn writer_output_reparses() {
        let text = "a b 1.5\na c 3.0\nb c 0.1\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(write_edge_list(&g), text);
    }
}
