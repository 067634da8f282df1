//! Continuous-time Markov branching process: split times, extinction,
//! skeleton statistics and split-time tail probes.

mod process;
mod skeleton;
mod tail;

pub use process::{
    extinction_frequency, simulate_bp, split_time, survival_cap, BpTrace, ExtinctionEstimate, OffspringLaw,
    BLOCK_RUNS,
};
pub use skeleton::{skeleton_single_child_prob, skeleton_with_doubling, SkeletonEstimate, DEFAULT_SKELETON_DEPTH};
pub use tail::{
    required_runs, tail_exponent_probe, tail_probe, tail_rate, write_probe_csv, TailProbeRow, PROBE_CSV_HEADER,
    PROBE_RUNS_FACTOR,
};
