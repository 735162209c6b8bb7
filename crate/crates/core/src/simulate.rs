//! Deterministic diffusion with blocked nodes, and blocking-policy comparison.
//!
//! Content leaves the source at time 0 and reaches each node at its
//! earliest arrival time: the cheapest path cost that avoids every blocked
//! node. A node counts as reached when that time is within the horizon.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arborescence::build_mcwdst;
use crate::graph::{NodeId, WeightedDigraph};
use crate::ranking::{rank_tree, TimingStrategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("unknown source node {0}")]
    UnknownSource(NodeId),
    #[error("source node {0} is in the blocked set")]
    SourceBlocked(NodeId),
    #[error("k grid is empty")]
    EmptyGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionOutcome {
    /// Reached nodes in ascending index order.
    pub reached: Vec<NodeId>,
    /// Arrival time per dense index; `None` if not reached.
    pub arrival: Vec<Option<f64>>,
    pub blocked: BTreeSet<NodeId>,
    /// Nodes reached with nothing blocked (same horizon) but not reached now.
    pub saved: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Arrival {
    time: f64,
    node: NodeId,
}

impl Eq for Arrival {}

impl Ord for Arrival {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn earliest_arrival(
    graph: &WeightedDigraph,
    source: NodeId,
    blocked: &BTreeSet<NodeId>,
    horizon: f64,
) -> Vec<Option<f64>> {
    let n = graph.node_count();
    let mut is_blocked = vec![false; n];
    for b in blocked {
        if b.0 < n {
            is_blocked[b.0] = true;
        }
    }
    let mut best = vec![f64::INFINITY; n];
    let mut arrival = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[source.0] = 0.0;
    heap.push(Arrival {
        time: 0.0,
        node: source,
    });
    while let Some(Arrival { time, node }) = heap.pop() {
        if arrival[node.0].is_some() {
            continue;
        }
        if time > horizon {
            break;
        }
        arrival[node.0] = Some(time);
        for e in graph.out_edges(node) {
            if is_blocked[e.dst.0] {
                continue;
            }
            let t = time + e.cost;
            if t < best[e.dst.0] {
                best[e.dst.0] = t;
                heap.push(Arrival {
                    time: t,
                    node: e.dst,
                });
            }
        }
    }
    arrival
}

/// Runs the diffusion from `source`. `horizon` may be `f64::INFINITY`.
pub fn simulate_diffusion(
    graph: &WeightedDigraph,
    source: NodeId,
    blocked: &BTreeSet<NodeId>,
    horizon: f64,
) -> Result<DiffusionOutcome, SimulationError> {
    if source.0 >= graph.node_count() {
        return Err(SimulationError::UnknownSource(source));
    }
    if blocked.contains(&source) {
        return Err(SimulationError::SourceBlocked(source));
    }
    let arrival = earliest_arrival(graph, source, blocked, horizon);
    let reached: Vec<NodeId> = arrival
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_some())
        .map(|(i, _)| NodeId(i))
        .collect();
    let baseline = if blocked.is_empty() {
        reached.len()
    } else {
        earliest_arrival(graph, source, &BTreeSet::new(), horizon)
            .iter()
            .filter(|a| a.is_some())
            .count()
    };
    Ok(DiffusionOutcome {
        saved: baseline - reached.len(),
        reached,
        arrival,
        blocked: blocked.clone(),
    })
}

/// Which nodes to block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockingPolicy {
    /// First `k` non-source nodes of the propagation-tree blocking order.
    RankedTopK { strategy: TimingStrategy, k: usize },
    /// `k` nodes drawn uniformly from the non-source nodes reachable from the source.
    RandomK { k: usize, seed: u64 },
    /// The `k` reachable non-source nodes with the largest out-degree.
    OutDegreeK { k: usize },
}

impl BlockingPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            BlockingPolicy::RankedTopK { .. } => "ranked",
            BlockingPolicy::RandomK { .. } => "random",
            BlockingPolicy::OutDegreeK { .. } => "out_degree",
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            BlockingPolicy::RankedTopK { k, .. }
            | BlockingPolicy::RandomK { k, .. }
            | BlockingPolicy::OutDegreeK { k } => k,
        }
    }

    /// Chooses the blocked set. The source is never included.
    pub fn select(
        &self,
        graph: &WeightedDigraph,
        source: NodeId,
    ) -> Result<BTreeSet<NodeId>, SimulationError> {
        if source.0 >= graph.node_count() {
            return Err(SimulationError::UnknownSource(source));
        }
        let tree = build_mcwdst(graph, source).expect("source checked above");
        let blocked = match *self {
            BlockingPolicy::RankedTopK { strategy, k } => rank_tree(&tree, strategy)
                .order()
                .filter(|&v| v != source)
                .take(k)
                .collect(),
            BlockingPolicy::RandomK { k, seed } => {
                let pool: Vec<NodeId> = tree.members().filter(|&v| v != source).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sample(&mut rng, pool.len(), k.min(pool.len()))
                    .into_iter()
                    .map(|i| pool[i])
                    .collect()
            }
            BlockingPolicy::OutDegreeK { k } => {
                let mut pool: Vec<NodeId> = tree.members().filter(|&v| v != source).collect();
                pool.sort_by(|a, b| {
                    graph
                        .out_degree(*b)
                        .cmp(&graph.out_degree(*a))
                        .then(a.cmp(b))
                });
                pool.into_iter().take(k).collect()
            }
        };
        Ok(blocked)
    }
}

/// Number of nodes saved by `policy`, and the set it blocked.
pub fn evaluate_policy(
    graph: &WeightedDigraph,
    source: NodeId,
    policy: &BlockingPolicy,
    horizon: f64,
) -> Result<(usize, BTreeSet<NodeId>), SimulationError> {
    let blocked = policy.select(graph, source)?;
    let outcome = simulate_diffusion(graph, source, &blocked, horizon)?;
    Ok((outcome.saved, blocked))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyRow {
    pub k: usize,
    pub policy: &'static str,
    /// Timing strategy for ranked rows, `-` for baselines.
    pub strategy: &'static str,
    pub saved: usize,
    pub reached: usize,
}

/// Rows ordered by ascending k, then ranked policies in the given strategy
/// order, then out-degree, then random (only when `seed` is set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyTable {
    pub rows: Vec<PolicyRow>,
}

impl PolicyTable {
    /// CSV with header `k,policy,strategy,saved,reached` and LF endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["k", "policy", "strategy", "saved", "reached"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                r.policy.to_owned(),
                r.strategy.to_owned(),
                r.saved.to_string(),
                r.reached.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Distinct k values, ascending.
    pub fn ks(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.rows.iter().map(|r| r.k).collect();
        set.into_iter().collect()
    }
}

pub fn compare_policies(
    graph: &WeightedDigraph,
    source: NodeId,
    k_grid: &[usize],
    strategies: &[TimingStrategy],
    seed: Option<u64>,
    horizon: f64,
) -> Result<PolicyTable, SimulationError> {
    if k_grid.is_empty() {
        return Err(SimulationError::EmptyGrid);
    }
    let ks: BTreeSet<usize> = k_grid.iter().copied().collect();

    let mut rows = Vec::new();
    for &k in &ks {
        let mut cells: Vec<(BlockingPolicy, &'static str)> = strategies
            .iter()
            .map(|&s| (BlockingPolicy::RankedTopK { strategy: s, k }, s.name()))
            .collect();
        cells.push((BlockingPolicy::OutDegreeK { k }, "-"));
        if let Some(seed) = seed {
            cells.push((BlockingPolicy::RandomK { k, seed }, "-"));
        }
        for (policy, strategy) in cells {
            let blocked = policy.select(graph, source)?;
            let outcome = simulate_diffusion(graph, source, &blocked, horizon)?;
            rows.push(PolicyRow {
                k,
                policy: policy.name(),
                strategy,
                saved: outcome.saved,
                reached: outcome.reached.len(),
            });
        }
    }
    Ok(PolicyTable { rows })
}
