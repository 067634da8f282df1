use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{GraphMode, SweepConfig};
use super::phase::{phase_timing, PhaseTiming};
use crate::degree::{theory_constants, DegreeLaw, DegreeSequence, LawDescriptor, TheoryConstants};
use crate::error::{Error, Result};
use crate::fpp::{diameter_and_flood, FppSummary};
use crate::graph::{
    assign_weights, sample_gnm, sample_gnp, sample_multigraph, sample_simple, Seed, WeightedGraph, TAG_FLOOD,
    TAG_SIZE, TAG_SOURCES, TAG_TOPOLOGY, TAG_TRIAL, TAG_WEIGHTS,
};
use crate::peel::{core_statistics, k_core, CoreStatistics};
use crate::stats::summarize;

/// Seed of trial `trial` at size `n`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> Seed {
    Seed::new(master).derive(TAG_SIZE, n as u64).derive(TAG_TRIAL, trial as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagnostics {
    pub alpha_step: usize,
    pub beta_step: usize,
    pub beta_clamped: bool,
    pub sources: usize,
    pub excluded: usize,
    /// Median of `(T(beta) - T(alpha)) / ln n`.
    pub gap_median: f64,
    /// Fractions of kept sources with `R`, `R'` and `R''`.
    pub event_frequencies: [f64; 3],
}

impl PhaseDiagnostics {
    fn from_timing(pt: &PhaseTiming, n: usize) -> Self {
        Self {
            alpha_step: pt.alpha_step,
            beta_step: pt.beta_step,
            beta_clamped: pt.beta_clamped,
            sources: pt.samples.len() + pt.excluded,
            excluded: pt.excluded,
            gap_median: pt.gap_quantile(n, 0.5),
            event_frequencies: pt.event_frequencies(),
        }
    }
}

/// One trial. The first fourteen fields are the CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub law: String,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub mode: String,
    pub diam_w: f64,
    pub flood_w: f64,
    pub diam_norm: f64,
    pub flood_norm: f64,
    pub core_ratio: f64,
    pub q1_tilde_emp: f64,
    /// Mean of `T(alpha)` over the kept phase sources.
    pub t_alpha: f64,
    pub t_beta: f64,
    pub wall_ms: f64,
    /// Flooding time from a uniform vertex of the largest component.
    pub flood_giant_w: f64,
    pub flood_giant_norm: f64,
    pub diameter_exact: bool,
    pub sssp_runs: usize,
    pub giant_size: usize,
    pub component_count: usize,
    /// Vertices analysed; below `n` when isolated vertices were dropped.
    pub vertices: usize,
    pub edges: usize,
    pub attempts: usize,
    pub core_edge_ratio: f64,
    pub phase: Option<PhaseDiagnostics>,
    pub error: Option<String>,
}

impl TrialRecord {
    fn failed(config: &SweepConfig, law: &str, n: usize, trial: usize, seed: u64, err: &Error) -> Self {
        Self {
            law: law.to_owned(),
            n,
            trial,
            seed,
            mode: config.mode_label(),
            diam_w: f64::NAN,
            flood_w: f64::NAN,
            diam_norm: f64::NAN,
            flood_norm: f64::NAN,
            core_ratio: f64::NAN,
            q1_tilde_emp: f64::NAN,
            t_alpha: f64::NAN,
            t_beta: f64::NAN,
            wall_ms: 0.0,
            flood_giant_w: f64::NAN,
            flood_giant_norm: f64::NAN,
            diameter_exact: false,
            sssp_runs: 0,
            giant_size: 0,
            component_count: 0,
            vertices: 0,
            edges: 0,
            attempts: 0,
            core_edge_ratio: f64::NAN,
            phase: None,
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Law and constants at one grid size.
#[derive(Clone, Debug)]
pub struct SizeContext {
    pub n: usize,
    pub law: DegreeLaw,
    pub constants: TheoryConstants,
}

impl SizeContext {
    pub fn new(descriptor: &LawDescriptor, n: usize) -> Result<Self> {
        let law = descriptor.resolve(Some(n))?;
        let constants = theory_constants(&law)?;
        Ok(Self { n, law, constants })
    }
}

/// The weighted graph of trial `(n, trial)` and the multigraphs drawn for it.
pub fn trial_graph(config: &SweepConfig, ctx: &SizeContext, seed: &Seed) -> Result<(WeightedGraph, usize)> {
    let n = ctx.n;
    let mut rng = seed.derive(TAG_TOPOLOGY, 0).rng();
    let (topology, attempts) = match config.graph_mode {
        GraphMode::Simple => {
            let seq = DegreeSequence::sample(&ctx.law, n, &mut rng)?;
            let s = sample_simple(&seq, &mut rng, config.max_attempts)?;
            (s.graph, s.attempts)
        }
        GraphMode::Multigraph => {
            let seq = DegreeSequence::sample(&ctx.law, n, &mut rng)?;
            (sample_multigraph(&seq, &mut rng), 1)
        }
        GraphMode::Gnp | GraphMode::Gnm => {
            let mu0 = config.descriptor()?.poisson_mean().unwrap_or_else(|| ctx.law.mean());
            let g = if config.graph_mode == GraphMode::Gnp {
                sample_gnp(n, (mu0 / n as f64).min(1.0), &mut rng)?
            } else {
                sample_gnm(n, (mu0 * n as f64 / 2.0).round() as usize, &mut rng)?
            };
            (g.without_isolated().0, 1)
        }
    };
    let weighted = assign_weights(&topology, &mut seed.derive(TAG_WEIGHTS, 0).rng());
    Ok((weighted, attempts))
}

/// Runs trial `trial` at size `n`; errors are returned, not recorded.
pub fn try_trial(config: &SweepConfig, ctx: &SizeContext, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let n = ctx.n;
    let seed = trial_seed(config.master_seed, n, trial);
    let law = config.descriptor()?.to_string();
    let (graph, attempts) = trial_graph(config, ctx, &seed)?;
    let fpp: FppSummary = diameter_and_flood(&graph, &seed.derive(TAG_FLOOD, 0), config.diameter_mode);
    let core = k_core(&graph, 2, None)?;
    let cs: CoreStatistics = core_statistics(&core, graph.n());
    let phase = if config.phase_sources > 0 && graph.n() > 0 {
        let mut rng = seed.derive(TAG_SOURCES, 0).rng();
        let sources = sample_indices(&mut rng, graph.n(), config.phase_sources.min(graph.n())).into_vec();
        Some(phase_timing(&graph, &graph.components(), &sources, &ctx.constants, config.epsilon))
    } else {
        None
    };
    let mean_of = |f: fn(&super::phase::PhaseSample) -> f64| {
        phase.as_ref().map_or(f64::NAN, |p| summarize(&p.samples.iter().map(f).collect::<Vec<_>>()).mean)
    };
    let ln_n = (n as f64).ln();
    let wall_ms = if config.record_wall_time { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok(TrialRecord {
        law,
        n,
        trial,
        seed: seed.value(),
        mode: config.mode_label(),
        diam_w: fpp.diam_w,
        flood_w: fpp.flood_w,
        diam_norm: fpp.diam_w / ln_n,
        flood_norm: fpp.flood_w / ln_n,
        core_ratio: cs.size_ratio,
        q1_tilde_emp: cs.q1_tilde,
        t_alpha: mean_of(|s| s.t_alpha),
        t_beta: mean_of(|s| s.t_beta),
        wall_ms,
        flood_giant_w: fpp.flood_giant_w,
        flood_giant_norm: fpp.flood_giant_w / ln_n,
        diameter_exact: fpp.diameter.exact,
        sssp_runs: fpp.diameter.sssp_runs,
        giant_size: fpp.giant_size,
        component_count: fpp.component_count,
        vertices: graph.n(),
        edges: graph.m(),
        attempts,
        core_edge_ratio: cs.edge_ratio,
        phase: phase.as_ref().map(|p| PhaseDiagnostics::from_timing(p, n)),
        error: None,
    })
}

/// Runs one trial; a failure becomes a record with `NaN` fields and the error text.
pub fn run_trial(config: &SweepConfig, ctx: &SizeContext, trial: usize) -> TrialRecord {
    try_trial(config, ctx, trial).unwrap_or_else(|e| {
        let law = config.descriptor().map_or_else(|_| config.law.clone(), |d| d.to_string());
        TrialRecord::failed(config, &law, ctx.n, trial, trial_seed(config.master_seed, ctx.n, trial).value(), &e)
    })
}

/// Resolves the law at every grid size; fails unless all are supercritical.
pub fn size_contexts(config: &SweepConfig) -> Result<Vec<SizeContext>> {
    config.validate()?;
    let descriptor = config.descriptor()?;
    config.n_grid.iter().map(|&n| SizeContext::new(&descriptor, n)).collect()
}

/// Runs every `(n, trial)` in parallel; records come back ordered by
/// `(n, trial)`. `progress` sees each record as it completes.
pub fn run_sweep(config: &SweepConfig, progress: impl Fn(&TrialRecord) + Sync) -> Result<Vec<TrialRecord>> {
    let contexts = size_contexts(config)?;
    let jobs: Vec<(&SizeContext, usize)> =
        contexts.iter().flat_map(|ctx| (0..config.trials).map(move |t| (ctx, t))).collect();
    Ok(jobs
        .into_par_iter()
        .map(|(ctx, t)| {
            let rec = run_trial(config, ctx, t);
            progress(&rec);
            rec
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        let mut c = SweepConfig::new("regular 3", vec![60, 120], 3, 11);
        c.phase_sources = 4;
        c
    }

    #[test]
    fn records_are_ordered_and_reproducible() {
        let c = small();
        let recs = run_sweep(&c, |_| {}).unwrap();
        let keys: Vec<(usize, usize)> = recs.iter().map(|r| (r.n, r.trial)).collect();
        assert_eq!(keys, vec![(60, 0), (60, 1), (60, 2), (120, 0), (120, 1), (120, 2)]);
        let ctx = SizeContext::new(&c.descriptor().unwrap(), 120).unwrap();
        let again = run_trial(&c, &ctx, 1);
        assert_eq!(again.diam_w.to_bits(), recs[4].diam_w.to_bits());
        assert_eq!(again.flood_w.to_bits(), recs[4].flood_w.to_bits());
        for r in &recs {
            assert!(r.is_ok());
            assert!(r.flood_w <= r.diam_w);
            assert_eq!(r.core_ratio, 1.0);
            assert!(r.t_alpha <= r.t_beta);
        }
    }

    #[test]
    fn rejection_failure_is_recorded() {
        let mut c = SweepConfig::new("regular 8", vec![12], 2, 3);
        c.max_attempts = 1;
        let recs = run_sweep(&c, |_| {}).unwrap();
        assert!(recs.iter().any(|r| r.error.as_deref().is_some_and(|e| e.contains("no simple graph"))));
        assert!(recs.iter().filter(|r| !r.is_ok()).all(|r| r.diam_w.is_nan()));
    }

    #[test]
    fn subcritical_law_is_refused() {
        let c = SweepConfig::new("explicit\n1 0.5\n2 0.5\n", vec![100], 1, 1);
        assert!(matches!(run_sweep(&c, |_| {}), Err(Error::Subcritical { .. })));
    }

    #[test]
    fn gnp_drops_isolated_vertices() {
        let mut c = SweepConfig::new("poisson 2", vec![300], 1, 5);
        c.graph_mode = GraphMode::Gnp;
        let ctx = SizeContext::new(&c.descriptor().unwrap(), 300).unwrap();
        let (g, _) = trial_graph(&c, &ctx, &trial_seed(5, 300, 0)).unwrap();
        assert!(g.min_degree() >= 1);
        assert!(g.n() < 300);
    }
}
