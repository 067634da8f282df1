//! Weighted shortest paths, exploration traces and diameter computation.

mod construct;
mod diameter;
mod events;
mod sssp;
mod trace;

pub use construct::{explore_construct, ConstructedExploration, PartialGraph};
pub use diameter::{
    anchor_candidates, diameter, diameter_all_sources, diameter_and_flood, diameter_anchored, diameter_exact,
    DiameterMode, DiameterResult, FppSummary, DEFAULT_ANCHORS, PRUNE_SLACK,
};
pub use events::{trace_events, Flag, TraceEvents};
pub(crate) use events::clamp_beta;
pub use sssp::{sssp, DistanceVector, SsspWorkspace, Visit, UNREACHABLE};
pub use trace::{boundary_half_edges, explore_replay, explore_replay_with, ExplorationTrace};
