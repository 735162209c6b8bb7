//! Harmfulness scoring of propagation-tree nodes.
//!
//! Each member `n` gets
//!
//! ```text
//! rank(n) = H(n) + A(n) + (1 - f_t(n))
//! ```
//!
//! where `H` is the subtree height of `n` over the whole tree's height, `A`
//! is the proper-descendant count of `n` over the root's descendant count,
//! and `f_t` summarizes the latencies of the edges from `n` to its children
//! (0 for leaves). Nodes are blocked in descending rank order.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arborescence::PropagationTree;
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("node {0} is not a member of the tree")]
    UnknownNode(NodeId),
    #[error("cannot normalize an empty list of timestamps")]
    EmptyList,
    #[error("unknown timing strategy {0:?} (expected average, median or ratio)")]
    UnknownStrategy(String),
}

/// How the child-edge latencies of a node are summarized into `f_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimingStrategy {
    /// Mean of the min-max normalized latencies.
    Average,
    /// Median of the min-max normalized latencies.
    Median,
    /// Smallest raw latency over the largest.
    Ratio,
}

impl TimingStrategy {
    pub const ALL: [TimingStrategy; 3] = [
        TimingStrategy::Average,
        TimingStrategy::Median,
        TimingStrategy::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TimingStrategy::Average => "average",
            TimingStrategy::Median => "median",
            TimingStrategy::Ratio => "ratio",
        }
    }

    /// Applies the strategy to a nonempty list of positive latencies.
    pub fn summarize(self, costs: &[f64]) -> Result<f64, RankError> {
        match self {
            TimingStrategy::Average => {
                let norm = normalize_timestamps(costs)?;
                Ok(norm.iter().sum::<f64>() / norm.len() as f64)
            }
            TimingStrategy::Median => {
                let mut norm = normalize_timestamps(costs)?;
                norm.sort_by(f64::total_cmp);
                let mid = norm.len() / 2;
                Ok(if norm.len() % 2 == 1 {
                    norm[mid]
                } else {
                    (norm[mid - 1] + norm[mid]) / 2.0
                })
            }
            TimingStrategy::Ratio => {
                if costs.is_empty() {
                    return Err(RankError::EmptyList);
                }
                let (min, max) = min_max(costs);
                Ok(min / max)
            }
        }
    }
}

impl fmt::Display for TimingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimingStrategy {
    type Err = RankError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "average" | "avg" | "mean" => Ok(TimingStrategy::Average),
            "median" => Ok(TimingStrategy::Median),
            "ratio" => Ok(TimingStrategy::Ratio),
            _ => Err(RankError::UnknownStrategy(s.to_owned())),
        }
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// Min-max scales `costs` into `[0, 1]`; every value maps to 0.5 when all
/// are equal.
pub fn normalize_timestamps(costs: &[f64]) -> Result<Vec<f64>, RankError> {
    if costs.is_empty() {
        return Err(RankError::EmptyList);
    }
    let (min, max) = min_max(costs);
    if min == max {
        return Ok(vec![0.5; costs.len()]);
    }
    let span = max - min;
    Ok(costs.iter().map(|&t| (t - min) / span).collect())
}

/// One scored node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeScore {
    pub node: NodeId,
    /// Normalized subtree height `H(n)`.
    pub height: f64,
    /// Normalized subtree area `A(n)`.
    pub area: f64,
    /// Timing term `f_t(n)`.
    pub timing: f64,
    pub rank: f64,
}

/// All tree members scored under one strategy, in blocking order.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmReport {
    pub scores: Vec<NodeScore>,
    pub strategy: TimingStrategy,
    /// Height of the whole tree, in edges.
    pub tree_height: usize,
    /// Proper-descendant count of the root.
    pub tree_area: usize,
}

impl HarmReport {
    /// Scores in blocking order.
    pub fn order(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.scores.iter().map(|s| s.node)
    }

    pub fn score(&self, node: NodeId) -> Option<&NodeScore> {
        self.scores.iter().find(|s| s.node == node)
    }
}

fn check_member(tree: &PropagationTree, n: NodeId) -> Result<(), RankError> {
    if tree.contains(n) {
        Ok(())
    } else {
        Err(RankError::UnknownNode(n))
    }
}

/// Longest downward path from `n`, counted in edges.
pub fn subtree_height(tree: &PropagationTree, n: NodeId) -> Result<usize, RankError> {
    check_member(tree, n)?;
    let mut best = 0;
    let mut stack = vec![(n, 0usize)];
    while let Some((v, depth)) = stack.pop() {
        best = best.max(depth);
        stack.extend(tree.children(v).iter().map(|&c| (c, depth + 1)));
    }
    Ok(best)
}

/// Number of proper descendants of `n`.
pub fn subtree_area(tree: &PropagationTree, n: NodeId) -> Result<usize, RankError> {
    check_member(tree, n)?;
    let mut count = 0;
    let mut stack = tree.children(n).to_vec();
    while let Some(v) = stack.pop() {
        count += 1;
        stack.extend_from_slice(tree.children(v));
    }
    Ok(count)
}

fn child_costs(tree: &PropagationTree, n: NodeId) -> Vec<f64> {
    tree.children(n)
        .iter()
        .map(|&c| tree.parent(c).expect("child has a parent").1)
        .collect()
}

/// `f_t(n)`; zero for leaves regardless of strategy.
pub fn timing_term(
    tree: &PropagationTree,
    n: NodeId,
    strategy: TimingStrategy,
) -> Result<f64, RankError> {
    check_member(tree, n)?;
    let costs = child_costs(tree, n);
    if costs.is_empty() {
        return Ok(0.0);
    }
    strategy.summarize(&costs)
}

fn score(
    n: NodeId,
    height: usize,
    area: usize,
    timing: f64,
    tree_height: usize,
    tree_area: usize,
) -> NodeScore {
    let h = if tree_height == 0 {
        0.0
    } else {
        height as f64 / tree_height as f64
    };
    let a = if tree_area == 0 {
        0.0
    } else {
        area as f64 / tree_area as f64
    };
    NodeScore {
        node: n,
        height: h,
        area: a,
        timing,
        rank: h + a + (1.0 - timing),
    }
}

pub fn rank_node(
    tree: &PropagationTree,
    n: NodeId,
    strategy: TimingStrategy,
) -> Result<NodeScore, RankError> {
    let height = subtree_height(tree, n)?;
    let area = subtree_area(tree, n)?;
    let timing = timing_term(tree, n, strategy)?;
    let root = tree.root();
    let tree_height = subtree_height(tree, root)?;
    let tree_area = subtree_area(tree, root)?;
    Ok(score(n, height, area, timing, tree_height, tree_area))
}

/// Scores every member and sorts by descending rank, ties by ascending index.
pub fn rank_tree(tree: &PropagationTree, strategy: TimingStrategy) -> HarmReport {
    let bound = tree.index_bound();
    let mut height = vec![0usize; bound];
    let mut area = vec![0usize; bound];
    let order = tree.bfs_order();
    for &v in order.iter().rev() {
        if let Some((p, _)) = tree.parent(v) {
            height[p.0] = height[p.0].max(height[v.0] + 1);
            area[p.0] += area[v.0] + 1;
        }
    }
    let root = tree.root();
    let (tree_height, tree_area) = (height[root.0], area[root.0]);

    let mut scores: Vec<NodeScore> = tree
        .members()
        .map(|v| {
            let timing = timing_term(tree, v, strategy).expect("members are valid nodes");
            score(v, height[v.0], area[v.0], timing, tree_height, tree_area)
        })
        .collect();
    scores.sort_by(|a, b| b.rank.total_cmp(&a.rank).then(a.node.cmp(&b.node)));

    HarmReport {
        scores,
        strategy,
        tree_height,
        tree_area,
    }
}

/// The first `min(k, len)` entries of the blocking order.
pub fn top_k(report: &HarmReport, k: usize) -> &[NodeScore] {
    &report.scores[..k.min(report.scores.len())]
}

/// Share of scored nodes in the `(1, 2]` and `(2, 3]` bands.
///
/// Fractions are taken over nodes with rank above 1. Nodes at exactly 1
/// (leaves) and any below 1 are only counted.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BucketDistribution {
    pub mild: usize,
    pub severe: usize,
    pub rank_one: usize,
    pub below_one: usize,
}

impl BucketDistribution {
    pub fn from_scores<'a, I>(scores: I) -> Self
    where
        I: IntoIterator<Item = &'a NodeScore>,
    {
        let mut d = BucketDistribution::default();
        for s in scores {
            if s.rank > 2.0 {
                d.severe += 1;
            } else if s.rank > 1.0 {
                d.mild += 1;
            } else if s.rank == 1.0 {
                d.rank_one += 1;
            } else {
                d.below_one += 1;
            }
        }
        d
    }

    fn scored(&self) -> usize {
        self.mild + self.severe
    }

    /// Fraction with rank in `(1, 2]`; 0 when no node ranks above 1.
    pub fn mild_fraction(&self) -> f64 {
        match self.scored() {
            0 => 0.0,
            n => self.mild as f64 / n as f64,
        }
    }

    /// Fraction with rank in `(2, 3]`; 0 when no node ranks above 1.
    pub fn severe_fraction(&self) -> f64 {
        match self.scored() {
            0 => 0.0,
            n => self.severe as f64 / n as f64,
        }
    }
}

pub fn bucket_distribution(report: &HarmReport) -> BucketDistribution {
    BucketDistribution::from_scores(&report.scores)
}

/// How top-k nodes are drawn from several trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolMode {
    /// Merge every tree's scores, then take the global top k.
    Pooled,
    /// Take the top k of each tree, then merge.
    PerTree,
}

impl PoolMode {
    pub fn name(self) -> &'static str {
        match self {
            PoolMode::Pooled => "pooled",
            PoolMode::PerTree => "per-tree",
        }
    }
}

pub fn corpus_buckets(reports: &[HarmReport], k: usize, mode: PoolMode) -> BucketDistribution {
    match mode {
        PoolMode::PerTree => {
            BucketDistribution::from_scores(reports.iter().flat_map(|r| top_k(r, k)))
        }
        PoolMode::Pooled => {
            let mut all: Vec<&NodeScore> = reports.iter().flat_map(|r| &r.scores).collect();
            // stable: equal ranks keep corpus order
            all.sort_by(|a, b| b.rank.total_cmp(&a.rank));
            all.truncate(k);
            BucketDistribution::from_scores(all)
        }
    }
}

/// CSV table of top-k band percentages for a corpus of reports, one row per
/// `(k, strategy)` pair found in `reports_by_strategy`.
pub fn bucket_table(
    reports_by_strategy: &[(TimingStrategy, Vec<HarmReport>)],
    ks: &[usize],
    mode: PoolMode,
) -> String {
    let mut out = String::from("k,f_t,mode,pct_in_1_2,pct_in_2_3,rank_one,below_one\n");
    for &k in ks {
        for (strategy, reports) in reports_by_strategy {
            let d = corpus_buckets(reports, k, mode);
            out.push_str(&format!(
                "{k},{},{},{:.2},{:.2},{},{}\n",
                strategy.name(),
                mode.name(),
                100.0 * d.mild_fraction(),
                100.0 * d.severe_fraction(),
                d.rank_one,
                d.below_one
            ));
        }
    }
    out
}

/// Rounds to 9 significant digits.
fn sig9(x: f64) -> f64 {
    format!("{x:.8e}").parse().unwrap_or(x)
}

#[derive(Serialize)]
struct ScoreJson<'a> {
    node: &'a str,
    #[serde(rename = "H")]
    height: f64,
    #[serde(rename = "A")]
    area: f64,
    f_t: f64,
    rank: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    strategy: &'static str,
    tree_height: usize,
    tree_area: usize,
    nodes: Vec<ScoreJson<'a>>,
}

impl HarmReport {
    /// JSON document with the first `limit` entries of the blocking order
    /// (all of them for `None`).
    pub fn to_json(&self, tree: &PropagationTree, limit: Option<usize>) -> String {
        let take = limit.unwrap_or(usize::MAX);
        let doc = ReportJson {
            strategy: self.strategy.name(),
            tree_height: self.tree_height,
            tree_area: self.tree_area,
            nodes: self
                .scores
                .iter()
                .take(take)
                .map(|s| ScoreJson {
                    node: tree.id(s.node),
                    height: sig9(s.height),
                    area: sig9(s.area),
                    f_t: sig9(s.timing),
                    rank: sig9(s.rank),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}
