//! Weighted multigraphs, configuration-model and Erdős–Rényi samplers, and
//! seed plumbing.

mod dump;
mod sample;
mod seed;
mod weighted;

pub use dump::{dump_to_string, parse_dump, write_dump};
pub(crate) use sample::half_edge_owners;
pub use sample::{
    assign_weights, exp1, sample_gnm, sample_gnp, sample_multigraph, sample_simple, SimpleSample,
    DEFAULT_MAX_ATTEMPTS,
};
pub use seed::{
    splitmix64, Seed, TAG_FLOOD, TAG_SIZE, TAG_SOURCES, TAG_TOPOLOGY, TAG_TRIAL, TAG_WEIGHTS,
};
pub use weighted::{Components, Incidence, WeightedGraph};
