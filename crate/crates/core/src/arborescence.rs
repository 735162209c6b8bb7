//! Propagation tree construction.
//!
//! [`build_mcwdst`] grows a directed spanning tree from a source node in
//! frontier rounds. Every round scans the untested out-edges of the current
//! frontier: an unseen head is attached to the tree, and a head already in
//! the tree is re-parented when the new edge gives it a strictly smaller
//! cumulative cost from the root. Edges into the root are never considered.
//!
//! A re-parented node goes back on the frontier, so its out-edges are tested
//! again against its new distance. The rounds therefore run to a fixpoint in
//! which every member's distance is its minimum path cost from the root.
//!
//! [`oracle_shortest_path_tree`] is a plain label-setting (Dijkstra) search
//! kept separate from the tree builder so the two can be checked against
//! each other.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{NodeId, WeightedDigraph};

/// Minimum improvement required to re-parent a node.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unknown root node {0}")]
    UnknownRoot(String),
}

/// A tree rooted at the source, over the dense index space of the graph it
/// was built from.
#[derive(Debug, Clone)]
pub struct PropagationTree {
    ids: Arc<[String]>,
    root: NodeId,
    parent: Vec<Option<(NodeId, f64)>>,
    dist: Vec<Option<f64>>,
    members: Vec<NodeId>,
    children: Vec<Vec<NodeId>>,
}

impl PropagationTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Number of tree members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false: a tree holds at least its root.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending dense-index order.
    pub fn members(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.dist.get(node.0).is_some_and(Option::is_some)
    }

    /// Parent and connecting edge cost; `None` for the root and for non-members.
    pub fn parent(&self, node: NodeId) -> Option<(NodeId, f64)> {
        self.parent.get(node.0).copied().flatten()
    }

    /// Cumulative cost from the root; `None` for non-members.
    pub fn dist(&self, node: NodeId) -> Option<f64> {
        self.dist.get(node.0).copied().flatten()
    }

    /// Children in ascending dense-index order.
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        self.children.get(node.0).map_or(&[], Vec::as_slice)
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.children(node).is_empty()
    }

    /// Tree edges `(parent, child, cost)`, ordered by child index.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.members
            .iter()
            .filter_map(|&v| self.parent(v).map(|(p, c)| (p, v, c)))
    }

    pub fn id(&self, node: NodeId) -> &str {
        &self.ids[node.0]
    }

    /// Size of the dense index space of the originating graph.
    pub fn index_bound(&self) -> usize {
        self.ids.len()
    }

    /// Members in breadth-first order from the root, children visited in
    /// ascending index order.
    pub fn bfs_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.members.len());
        order.push(self.root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend_from_slice(self.children(v));
        }
        order
    }
}

/// Counters collected while building a tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Frontier rounds executed (iterations of the outer loop).
    pub rounds: usize,
    /// `(frontier vertex, out-edge)` pairs examined.
    pub inspections: u64,
}

pub fn build_mcwdst(graph: &WeightedDigraph, root: NodeId) -> Result<PropagationTree, TreeError> {
    build_mcwdst_with_stats(graph, root).map(|(t, _)| t)
}

/// Number of `(vertex, edge)` inspections [`build_mcwdst`] performs.
pub fn iteration_count(graph: &WeightedDigraph, root: NodeId) -> Result<u64, TreeError> {
    build_mcwdst_with_stats(graph, root).map(|(_, s)| s.inspections)
}

pub fn build_mcwdst_with_stats(
    graph: &WeightedDigraph,
    root: NodeId,
) -> Result<(PropagationTree, BuildStats), TreeError> {
    let n = graph.node_count();
    if root.0 >= n {
        return Err(TreeError::UnknownRoot(root.to_string()));
    }

    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut parent: Vec<Option<(NodeId, f64)>> = vec![None; n];
    let mut queued = vec![false; n];
    let mut stats = BuildStats::default();

    dist[root.0] = Some(0.0);
    let mut frontier = vec![root];

    while !frontier.is_empty() {
        stats.rounds += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for e in graph.out_edges(u) {
                if e.dst == root {
                    continue;
                }
                stats.inspections += 1;
                // dist[u] is read per edge: u may itself improve mid-round
                // through an earlier frontier vertex.
                let du = dist[u.0].expect("frontier vertices are tree members");
                let candidate = du + e.cost;
                let v = e.dst.0;
                let improves = match dist[v] {
                    None => true,
                    Some(dv) => candidate < dv - IMPROVEMENT_TOLERANCE,
                };
                if improves {
                    dist[v] = Some(candidate);
                    parent[v] = Some((u, e.cost));
                    if !queued[v] {
                        queued[v] = true;
                        next.push(e.dst);
                    }
                }
            }
        }
        next.sort_unstable();
        for v in &next {
            queued[v.0] = false;
        }
        frontier = next;
    }

    // Re-derive distances along the final parent links so that
    // dist(v) == dist(parent) + cost holds exactly, not just within tolerance.
    let members: Vec<NodeId> = (0..n).filter(|&v| dist[v].is_some()).map(NodeId).collect();
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &v in &members {
        if let Some((p, _)) = parent[v.0] {
            children[p.0].push(v);
        }
    }

    let mut tree = PropagationTree {
        ids: Arc::clone(graph.ids()),
        root,
        parent,
        dist,
        members,
        children,
    };
    for v in tree.bfs_order().into_iter().skip(1) {
        let (p, c) = tree.parent[v.0].expect("non-root members have parents");
        tree.dist[v.0] = Some(tree.dist[p.0].expect("parent is a member") + c);
    }
    Ok((tree, stats))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact single-source minimum path costs for every node reachable from `root`.
pub fn oracle_shortest_path_tree(
    graph: &WeightedDigraph,
    root: NodeId,
) -> Result<BTreeMap<NodeId, f64>, TreeError> {
    let n = graph.node_count();
    if root.0 >= n {
        return Err(TreeError::UnknownRoot(root.to_string()));
    }
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[root.0] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: root,
    });

    while let Some(HeapEntry { dist, node }) = heap.pop() {
        if done[node.0] {
            continue;
        }
        done[node.0] = true;
        for e in graph.out_edges(node) {
            let nd = dist + e.cost;
            if nd < best[e.dst.0] {
                best[e.dst.0] = nd;
                heap.push(HeapEntry {
                    dist: nd,
                    node: e.dst,
                });
            }
        }
    }

    Ok((0..n)
        .filter(|&v| done[v])
        .map(|v| (NodeId(v), best[v]))
        .collect())
}
