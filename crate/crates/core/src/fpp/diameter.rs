//! Weighted diameter and flooding time.
//!
//! Besides brute force over all sources, the exact mode keeps an upper bound
//! `hi[w] = min_s ecc(s) + dist(s, w)` over evaluated sources `s` and only
//! evaluates vertices whose bound still exceeds the best eccentricity found.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sssp::{SsspWorkspace, UNREACHABLE};
use crate::graph::{Components, Seed, WeightedGraph};

/// Number of minimum-degree anchors evaluated exactly.
pub const DEFAULT_ANCHORS: usize = 64;
/// Relative margin below the best eccentricity required to discard a vertex.
pub const PRUNE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterMode {
    /// One SSSP per vertex.
    AllSources,
    /// Exact, with eccentricity bounds pruning sources.
    Exact,
    /// Lower bound from minimum-degree anchors and their farthest vertices.
    AnchoredLowerBound,
}

impl DiameterMode {
    pub fn is_exact(self) -> bool {
        !matches!(self, DiameterMode::AnchoredLowerBound)
    }
}

impl fmt::Display for DiameterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiameterMode::AllSources => "all_sources",
            DiameterMode::Exact => "exact",
            DiameterMode::AnchoredLowerBound => "anchored_lb",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterResult {
    pub value: f64,
    /// A pair at distance `value`.
    pub endpoints: (usize, usize),
    pub mode: DiameterMode,
    /// `false` for a lower bound.
    pub exact: bool,
    pub sssp_runs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Ecc {
    source: usize,
    far: usize,
    value: f64,
}

impl Ecc {
    fn better(self, other: Ecc) -> Ecc {
        match other.value.total_cmp(&self.value) {
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal if other.source < self.source => other,
            _ => self,
        }
    }
}

fn eccentricity(ws: &mut SsspWorkspace, graph: &WeightedGraph, s: usize) -> Ecc {
    ws.run(graph, s, usize::MAX);
    let far = *ws.order().last().unwrap() as usize;
    Ecc { source: s, far, value: ws.eccentricity() }
}

fn zero_result(mode: DiameterMode) -> DiameterResult {
    DiameterResult { value: 0.0, endpoints: (0, 0), mode, exact: mode.is_exact(), sssp_runs: 0 }
}

pub fn diameter(graph: &WeightedGraph, mode: DiameterMode) -> DiameterResult {
    match mode {
        DiameterMode::AllSources => diameter_all_sources(graph),
        DiameterMode::Exact => diameter_exact(graph),
        DiameterMode::AnchoredLowerBound => diameter_anchored(graph, DEFAULT_ANCHORS),
    }
}

/// Maximum finite distance over all ordered pairs by brute force.
pub fn diameter_all_sources(graph: &WeightedGraph) -> DiameterResult {
    let n = graph.n();
    if n == 0 {
        return zero_result(DiameterMode::AllSources);
    }
    let best = (0..n)
        .into_par_iter()
        .map_init(|| SsspWorkspace::new(n), |ws, s| eccentricity(ws, graph, s))
        .reduce_with(Ecc::better)
        .unwrap();
    DiameterResult {
        value: best.value,
        endpoints: (best.source, best.far),
        mode: DiameterMode::AllSources,
        exact: true,
        sssp_runs: n,
    }
}

/// Minimum-degree vertices of the largest component ranked by slow local
/// escape: the largest `T_u(k)` for `k = ceil(ln^2 n)`, ties to lower index.
pub fn anchor_candidates(graph: &WeightedGraph, comps: &Components, count: usize) -> Vec<usize> {
    let Some(giant) = comps.giant() else { return Vec::new() };
    let members = comps.members(giant);
    let d_min = members.iter().map(|&v| graph.degree(v)).min().unwrap_or(0);
    let ln_n = (graph.n().max(2) as f64).ln();
    let k = (ln_n * ln_n).ceil() as usize;
    let candidates: Vec<usize> = members.into_iter().filter(|&v| graph.degree(v) == d_min).collect();
    let mut scored: Vec<(f64, usize)> = candidates
        .into_par_iter()
        .map_init(
            || SsspWorkspace::new(graph.n()),
            |ws, v| {
                ws.run(graph, v, k + 1);
                (ws.eccentricity(), v)
            },
        )
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().take(count).map(|(_, v)| v).collect()
}

fn eval_all(graph: &WeightedGraph, sources: &[usize]) -> Vec<Ecc> {
    sources
        .par_iter()
        .map_init(|| SsspWorkspace::new(graph.n()), |ws, &s| eccentricity(ws, graph, s))
        .collect()
}

/// Lower bound: exact eccentricities of the anchors and of each anchor's
/// farthest vertex.
pub fn diameter_anchored(graph: &WeightedGraph, anchors: usize) -> DiameterResult {
    if graph.n() == 0 {
        return zero_result(DiameterMode::AnchoredLowerBound);
    }
    let comps = graph.components();
    let (best, runs) = anchored_phase(graph, &comps, anchors, None);
    DiameterResult {
        value: best.value,
        endpoints: (best.source, best.far),
        mode: DiameterMode::AnchoredLowerBound,
        exact: false,
        sssp_runs: runs,
    }
}

/// Runs the anchor sweeps; with `bounds`, also tightens the upper bounds
/// using every evaluated source.
fn anchored_phase(
    graph: &WeightedGraph,
    comps: &Components,
    anchors: usize,
    mut bounds: Option<&mut Bounds>,
) -> (Ecc, usize) {
    let first = anchor_candidates(graph, comps, anchors);
    let first = if first.is_empty() { vec![0] } else { first };
    let mut best = Ecc { source: first[0], far: first[0], value: 0.0 };
    let mut runs = 0;
    let mut evaluated = std::collections::BTreeSet::new();
    let mut round = first;
    for _ in 0..2 {
        round.retain(|v| evaluated.insert(*v));
        if round.is_empty() {
            break;
        }
        let eccs = match bounds.as_deref_mut() {
            Some(b) => b.evaluate(graph, &round),
            None => eval_all(graph, &round),
        };
        runs += eccs.len();
        for e in &eccs {
            best = best.better(*e);
        }
        round = eccs.iter().map(|e| e.far).collect();
    }
    (best, runs)
}

struct Bounds {
    hi: Vec<f64>,
    /// `max_s max(dist(s, w), ecc(s) - dist(s, w))`; 0 until reached.
    lo: Vec<f64>,
    evaluated: Vec<bool>,
}

impl Bounds {
    fn evaluate(&mut self, graph: &WeightedGraph, sources: &[usize]) -> Vec<Ecc> {
        let n = graph.n();
        let results: Vec<(Ecc, Vec<(u32, f64)>)> = sources
            .par_iter()
            .map_init(
                || SsspWorkspace::new(n),
                |ws, &s| {
                    let e = eccentricity(ws, graph, s);
                    let reached = ws.order().iter().map(|&v| (v, ws.dist(v as usize))).collect();
                    (e, reached)
                },
            )
            .collect();
        let mut out = Vec::with_capacity(results.len());
        for (e, reached) in results {
            self.evaluated[e.source] = true;
            for (v, d) in reached {
                let v = v as usize;
                self.hi[v] = self.hi[v].min(e.value + d);
                self.lo[v] = self.lo[v].max(d.max(e.value - d));
            }
            out.push(e);
        }
        out
    }
}

/// Exact diameter by eccentricity-bound pruning.
pub fn diameter_exact(graph: &WeightedGraph) -> DiameterResult {
    let n = graph.n();
    if n == 0 {
        return zero_result(DiameterMode::Exact);
    }
    let comps = graph.components();
    let mut bounds = Bounds { hi: vec![UNREACHABLE; n], lo: vec![0.0; n], evaluated: vec![false; n] };
    let (mut best, mut runs) = anchored_phase(graph, &comps, DEFAULT_ANCHORS, Some(&mut bounds));
    let batch = rayon::current_num_threads().max(1);

    let mut order: Vec<u32> = (0..comps.count() as u32).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(comps.sizes[c as usize]), c));
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.count()];
    for v in 0..n {
        members[comps.label[v] as usize].push(v);
    }
    let mut round = 0usize;
    for c in order {
        let mut active = std::mem::take(&mut members[c as usize]);
        loop {
            let cut = best.value * (1.0 - PRUNE_SLACK);
            active.retain(|&v| !bounds.evaluated[v] && !(bounds.hi[v] <= cut));
            if active.is_empty() {
                break;
            }
            // Mostly central picks, whose small eccentricity prunes a wide
            // ball, with every fourth round peripheral to raise the lower bound.
            let picks = if round % 4 != 0 {
                top_by_key(&active, |v| -bounds.lo[v], batch)
            } else {
                top_by_key(&active, |v| bounds.hi[v], batch)
            };
            round += 1;
            for e in bounds.evaluate(graph, &picks) {
                best = best.better(e);
            }
            runs += picks.len();
        }
    }
    DiameterResult {
        value: best.value,
        endpoints: (best.source, best.far),
        mode: DiameterMode::Exact,
        exact: true,
        sssp_runs: runs,
    }
}

/// The `k` active vertices with the largest key, ties to lower index.
fn top_by_key(active: &[usize], key: impl Fn(usize) -> f64, k: usize) -> Vec<usize> {
    if k == 1 {
        let mut best = active[0];
        for &v in &active[1..] {
            if key(v) > key(best) {
                best = v;
            }
        }
        return vec![best];
    }
    let mut sorted = active.to_vec();
    sorted.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    sorted.truncate(k);
    sorted
}

/// Distance statistics of one weighted graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FppSummary {
    pub diameter: DiameterResult,
    pub diam_w: f64,
    /// Eccentricity of a uniform vertex of the whole graph.
    pub flood_w: f64,
    pub flood_source: usize,
    /// Eccentricity of a uniform vertex of the largest component.
    pub flood_giant_w: f64,
    pub flood_giant_source: usize,
    pub giant_size: usize,
    pub component_count: usize,
    /// Mean finite distance from the giant-component flooding source.
    pub typical_distance: f64,
}

/// Diameter plus flooding times from sources drawn with `flood_seed`.
pub fn diameter_and_flood(graph: &WeightedGraph, flood_seed: &Seed, mode: DiameterMode) -> FppSummary {
    let n = graph.n();
    let comps = graph.components();
    let diameter = diameter(graph, mode);
    if n == 0 {
        return FppSummary {
            diam_w: 0.0,
            diameter,
            flood_w: 0.0,
            flood_source: 0,
            flood_giant_w: 0.0,
            flood_giant_source: 0,
            giant_size: 0,
            component_count: 0,
            typical_distance: 0.0,
        };
    }
    let mut rng = flood_seed.rng();
    let flood_source = rng.random_range(0..n);
    let giant = comps.giant().unwrap();
    let giant_members = comps.members(giant);
    let flood_giant_source = giant_members[rng.random_range(0..giant_members.len())];

    let mut ws = SsspWorkspace::new(n);
    ws.run(graph, flood_source, usize::MAX);
    let flood_w = ws.eccentricity();
    ws.run(graph, flood_giant_source, usize::MAX);
    let flood_giant_w = ws.eccentricity();
    let reached = ws.order();
    let typical_distance = if reached.len() > 1 {
        reached[1..].iter().map(|&v| ws.dist(v as usize)).sum::<f64>() / (reached.len() - 1) as f64
    } else {
        0.0
    };
    FppSummary {
        diam_w: diameter.value,
        diameter,
        flood_w,
        flood_source,
        flood_giant_w,
        flood_giant_source,
        giant_size: comps.sizes[giant as usize],
        component_count: comps.count(),
        typical_distance,
    }
}
