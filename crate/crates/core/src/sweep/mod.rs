//! Seeded Monte Carlo sweeps over graph sizes, with CSV and JSON-lines output.

mod config;
mod harness;
mod output;
mod phase;

pub use config::{GraphMode, OutputPaths, SweepConfig};
pub use harness::{
    run_sweep, run_trial, size_contexts, trial_graph, trial_seed, try_trial, PhaseDiagnostics, SizeContext,
    TrialRecord,
};
pub use output::{
    aggregate, approaches_limit, write_aggregate_csv, write_csv, write_jsonl, write_outputs, SizeAggregate, Statistic,
    AGGREGATE_CSV_HEADER, CSV_HEADER,
};
pub use phase::{phase_timing, PhaseSample, PhaseTiming};
