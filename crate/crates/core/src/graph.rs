//! Immutable weighted directed graph with dense node indexing.
//!
//! Node identifiers are opaque string tokens. Each one is assigned a dense
//! index `0..n` in first-appearance order when the graph is built, and every
//! algorithm in this crate works on those indices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Dense index of a node inside a [`WeightedDigraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A directed edge with a strictly positive propagation cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge {src} -> {dst} has non-positive cost {cost}")]
    NonPositiveCost { src: String, dst: String, cost: f64 },
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: String, dst: String },
}

/// Directed graph with positive edge costs. Immutable once built.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    ids: Arc<[String]>,
    lookup: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    // CSR out-adjacency: edges of node v are `edges[offsets[v]..offsets[v + 1]]`
    // after the edge list has been sorted by (src, insertion order).
    offsets: Vec<usize>,
}

impl WeightedDigraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.lookup.get(id).copied()
    }

    /// Identifier string of a node. Panics if `node` is out of range.
    pub fn id(&self, node: NodeId) -> &str {
        &self.ids[node.0]
    }

    pub fn ids(&self) -> &Arc<[String]> {
        &self.ids
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.ids.len()).map(NodeId)
    }

    /// All edges, grouped by source in ascending dense-index order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, node: NodeId) -> &[Edge] {
        &self.edges[self.offsets[node.0]..self.offsets[node.0 + 1]]
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.offsets[node.0 + 1] - self.offsets[node.0]
    }

    pub fn cost(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        self.out_edges(src)
            .iter()
            .find(|e| e.dst == dst)
            .map(|e| e.cost)
    }

    /// Builds a graph from `(src, dst, cost)` triples, assigning dense
    /// indices in first-appearance order.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let mut builder = GraphBuilder::default();
        for (src, dst, cost) in edges {
            builder.add_edge(src, dst, cost)?;
        }
        Ok(builder.build())
    }
}

/// Incremental builder used by the parsers.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    lookup: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    seen: HashSet<(NodeId, NodeId)>,
}

impl GraphBuilder {
    /// Returns the dense index of `id`, inserting it if new.
    pub fn add_node(&mut self, id: &str) -> NodeId {
        if let Some(&n) = self.lookup.get(id) {
            return n;
        }
        let n = NodeId(self.ids.len());
        self.ids.push(id.to_owned());
        self.lookup.insert(id.to_owned(), n);
        n
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, cost: f64) -> Result<(), GraphError> {
        if src == dst {
            return Err(GraphError::SelfLoop(src.to_owned()));
        }
        // NaN fails this comparison too
        if cost <= 0.0 || !cost.is_finite() {
            return Err(GraphError::NonPositiveCost {
                src: src.to_owned(),
                dst: dst.to_owned(),
                cost,
            });
        }
        if let (Some(&s), Some(&d)) = (self.lookup.get(src), self.lookup.get(dst)) {
            if self.seen.contains(&(s, d)) {
                return Err(GraphError::DuplicateEdge {
                    src: src.to_owned(),
                    dst: dst.to_owned(),
                });
            }
        }
        let s = self.add_node(src);
        let d = self.add_node(dst);
        self.seen.insert((s, d));
        self.edges.push(Edge {
            src: s,
            dst: d,
            cost,
        });
        Ok(())
    }

    pub fn build(self) -> WeightedDigraph {
        let n = self.ids.len();
        let mut edges = self.edges;
        // stable: keeps insertion order among edges of the same source
        edges.sort_by_key(|e| e.src);
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.src.0 + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        WeightedDigraph {
            ids: self.ids.into(),
            lookup: self.lookup,
            edges,
            offsets,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_indices_follow_first_appearance() {
        let g = WeightedDigraph::from_edges([("b", "a", 1.0), ("a", "c", 2.0)]).unwrap();
        assert_eq!(g.node("b"), Some(NodeId(0)));
        assert_eq!(g.node("a"), Some(NodeId(1)));
        assert_eq!(g.node("c"), Some(NodeId(2)));
        assert_eq!(g.id(NodeId(2)), "c");
    }

    #[test]
    fn adjacency_groups_edges_by_source() {
        let g = WeightedDigraph::from_edges([("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 3.0)])
            .unwrap();
        let a = g.node("a").unwrap();
        let dsts: Vec<_> = g.out_edges(a).iter().map(|e| g.id(e.dst)).collect();
        assert_eq!(dsts, ["b", "c"]);
        assert_eq!(g.out_degree(g.node("c").unwrap()), 0);
        assert_eq!(g.cost(a, g.node("c").unwrap()), Some(3.0));
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(matches!(
            WeightedDigraph::from_edges([("a", "a", 1.0)]),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            WeightedDigraph::from_edges([("a", "b", -1.0)]),
            Err(GraphError::NonPositiveCost { .. })
        ));
        assert!(matches!(
            WeightedDigraph::from_edges([("a", "b", f64::NAN)]),
            Err(GraphError::NonPositiveCost { .. })
        ));
        assert!(matches!(
            WeightedDigraph::from_edges([("a", "b", 1.0), ("a", "b", 2.0)]),
            Err(GraphError::DuplicateEdge { .. })
        ));
    }
}
