//! Propagation-tree construction, node harmfulness ranking and blocking
//! simulation for weighted directed social graphs.
//!
//! Typical flow: load a graph ([`io`]), grow the propagation tree from a
//! flagged source ([`arborescence::build_mcwdst`]), score its members
//! ([`ranking::rank_tree`]) and measure how much a blocking order protects
//! the rest of the network ([`simulate`]).

pub mod arborescence;
pub mod graph;
pub mod io;
pub mod ranking;
pub mod simulate;
pub mod synth;

pub use arborescence::{build_mcwdst, oracle_shortest_path_tree, PropagationTree, TreeError};
pub use graph::{NodeId, WeightedDigraph};
pub use ranking::{rank_tree, HarmReport, NodeScore, TimingStrategy};
pub use simulate::{simulate_diffusion, BlockingPolicy, DiffusionOutcome};
