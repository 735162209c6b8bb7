//! Seeded synthetic graphs for benchmarks and randomized tests.

use std::collections::HashSet;

use rand::Rng;

use crate::graph::{Edge, GraphBuilder, NodeId, WeightedDigraph};

/// Uniform cost in `(0, max]`.
fn cost<R: Rng + ?Sized>(rng: &mut R, max: f64) -> f64 {
    max * (1.0 - rng.random::<f64>())
}

/// `nodes` nodes named `0..nodes` and `edges` distinct directed edges chosen
/// uniformly without self-loops, with costs uniform in `(0, 10]`.
///
/// Panics if `edges` exceeds `nodes * (nodes - 1)`.
pub fn random_digraph<R: Rng + ?Sized>(nodes: usize, edges: usize, rng: &mut R) -> WeightedDigraph {
    let capacity = nodes.saturating_mul(nodes.saturating_sub(1));
    assert!(
        edges <= capacity,
        "{edges} edges do not fit in {nodes} nodes"
    );
    let mut b = GraphBuilder::default();
    for i in 0..nodes {
        b.add_node(&i.to_string());
    }
    let mut seen = HashSet::with_capacity(edges);
    let mut picked: Vec<Edge> = Vec::with_capacity(edges);
    while picked.len() < edges {
        let s = rng.random_range(0..nodes);
        let d = rng.random_range(0..nodes);
        if s == d || !seen.insert((s, d)) {
            continue;
        }
        picked.push(Edge {
            src: NodeId(s),
            dst: NodeId(d),
            cost: cost(rng, 10.0),
        });
    }
    for e in picked {
        b.add_edge(&e.src.0.to_string(), &e.dst.0.to_string(), e.cost)
            .expect("generated edges are valid");
    }
    b.build()
}

/// Random recursive tree on `nodes` nodes rooted at `0`: node `i` hangs off a
/// uniformly chosen earlier node. Costs uniform in `(0, 10]`.
pub fn random_tree_graph<R: Rng + ?Sized>(nodes: usize, rng: &mut R) -> WeightedDigraph {
    let mut b = GraphBuilder::default();
    if nodes > 0 {
        b.add_node("0");
    }
    for i in 1..nodes {
        let p = rng.random_range(0..i);
        b.add_edge(&p.to_string(), &i.to_string(), cost(rng, 10.0))
            .expect("generated edges are valid");
    }
    b.build()
}
