use serde::{Deserialize, Serialize};

use crate::degree::{PhaseBounds, TheoryConstants};
use crate::fpp::{clamp_beta, explore_replay_with, trace_events, Flag, SsspWorkspace, TraceEvents};
use crate::graph::{Components, WeightedGraph};
use crate::stats::quantile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub source: usize,
    pub t_alpha: f64,
    pub t_beta: f64,
    pub events: TraceEvents,
}

impl PhaseSample {
    pub fn gap(&self) -> f64 {
        self.t_beta - self.t_alpha
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub alpha_step: usize,
    pub beta_step: usize,
    pub beta_clamped: bool,
    pub samples: Vec<PhaseSample>,
    /// Sources whose component has at most `beta` vertices besides the source.
    pub excluded: usize,
}

impl PhaseTiming {
    /// Quantile of `(T(beta) - T(alpha)) / ln n` over the kept sources.
    pub fn gap_quantile(&self, n: usize, p: f64) -> f64 {
        let ln_n = (n as f64).ln();
        let gaps: Vec<f64> = self.samples.iter().map(|s| s.gap() / ln_n).collect();
        quantile(&gaps, p)
    }

    /// Fractions of kept sources on which `R`, `R'` and `R''` hold.
    pub fn event_frequencies(&self) -> [f64; 3] {
        let m = self.samples.len().max(1) as f64;
        let freq = |f: fn(&TraceEvents) -> Flag| self.samples.iter().filter(|s| f(&s.events).holds()).count() as f64 / m;
        [freq(|e| e.r), freq(|e| e.r_prime), freq(|e| e.r_double_prime)]
    }
}

/// Exact `T_u(alpha)` and `T_u(beta)` for each source, with `alpha = ceil(ln^3 n)`
/// and `beta = ceil(3 sqrt(mu/(nu-1) n ln n))` clamped to `n - 1`.
pub fn phase_timing(
    graph: &WeightedGraph,
    comps: &Components,
    sources: &[usize],
    constants: &TheoryConstants,
    eps: f64,
) -> PhaseTiming {
    let n = graph.n();
    let bounds = PhaseBounds::new(constants, n);
    let (beta, beta_clamped) = clamp_beta(bounds.beta_step(), n);
    let alpha = bounds.alpha_step().min(beta);
    let mut ws = SsspWorkspace::new(n);
    let mut samples = Vec::new();
    let mut excluded = 0;
    for &u in sources {
        if comps.sizes[comps.label[u] as usize] <= beta {
            excluded += 1;
            continue;
        }
        let trace = explore_replay_with(&mut ws, graph, u, Some(beta), |_| false);
        samples.push(PhaseSample {
            source: u,
            t_alpha: trace.t[alpha],
            t_beta: trace.t[beta],
            events: trace_events(&trace, constants, n, eps),
        });
    }
    PhaseTiming { alpha_step: alpha, beta_step: beta, beta_clamped, samples, excluded }
}
