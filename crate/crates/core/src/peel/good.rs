use serde::{Deserialize, Serialize};

use super::cluster::clusters;
use super::kcore::{degree_one_at_stop, k_core};
use crate::degree::{core_theory, DegreeLaw, SizeBiasedLaw, TheoryConstants};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Good vertices of minimum degree: slow to leave their cluster and with a
/// cluster of bounded degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodVertices {
    pub d_min: u32,
    pub epsilon: f64,
    /// Lower bound on `T̄_u(1)`.
    pub threshold: f64,
    /// Upper bound on `deg(C_u)`.
    pub k: u32,
    /// Limiting probability that a candidate's cluster degree is at most `k`.
    pub y: f64,
    /// Asymptotic `E[Y]` for these `k` and `y`.
    pub expected: f64,
    pub candidates: usize,
    pub count: usize,
    /// Good vertices in increasing order.
    pub witnesses: Vec<usize>,
}

/// The cluster-degree cap and its probability for a law.
///
/// With `d_min >= 3` the terminal vertex is a neighbour of forward degree
/// `D̂`, so `deg(C_u) = d_min - 1 + D̂`. With `d_min = 2` the terminal is the
/// first vertex with `D̂ >= 2` and `deg(C_u) = D̂ + 1`. With `d_min = 1` the
/// cluster lives in the augmented 2-core and `deg(C_u)` is the core forward
/// degree. The default is the smallest cap reachable with positive probability.
pub fn cluster_degree_cap(law: &DegreeLaw, constants: &TheoryConstants, k_override: Option<u32>) -> Result<(u32, f64)> {
    let d = constants.d_min;
    let (q, offset): (SizeBiasedLaw, i64) = match d {
        0 => return Err(Error::InvalidLaw("good vertices need d_min >= 1".into())),
        1 => {
            let core = core_theory(law, constants)?;
            let tilde = core
                .tilde_p
                .ok_or_else(|| Error::InvalidLaw("the 2-core is asymptotically empty".into()))?;
            (SizeBiasedLaw::from_degree_law(&tilde)?, 0)
        }
        2 => (SizeBiasedLaw::from_degree_law(law)?, 1),
        _ => (SizeBiasedLaw::from_degree_law(law)?, d as i64 - 1),
    };
    let branching: Vec<(u32, f64)> = q.support().filter(|&(k, p)| k >= 2 && p > 0.0).collect();
    let mass: f64 = branching.iter().map(|&(_, p)| p).sum();
    let Some(&(first, _)) = branching.first() else {
        return Err(Error::InvalidLaw("no forward degree of at least two".into()));
    };
    let k = k_override.unwrap_or((first as i64 + offset) as u32);
    let reach: f64 = branching.iter().filter(|&&(j, _)| j as i64 + offset <= k as i64).map(|&(_, p)| p).sum();
    // With d_min = 2 the cap is conditioned on the walk reaching `D̂ >= 2`.
    let y = if d == 2 { reach / mass } else { reach };
    Ok((k, y))
}

/// Counts good vertices of `graph`, whose law is `law`.
pub fn count_good_vertices(
    graph: &WeightedGraph,
    law: &DegreeLaw,
    constants: &TheoryConstants,
    eps: f64,
    k_override: Option<u32>,
) -> Result<GoodVertices> {
    if !constants.is_supercritical() {
        return Err(Error::Subcritical { nu: constants.nu, constants: Box::new(constants.clone()) });
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("epsilon {eps} outside [0, 1]")));
    }
    let n = graph.n();
    let ln_n = (n as f64).ln();
    let d = constants.d_min;
    let (k, y) = cluster_degree_cap(law, constants, k_override)?;
    let n_eps = (n as f64).powf(eps);
    let (threshold, expected) = match d {
        1 => ((1.0 - eps) * ln_n / (1.0 - constants.lambda_star), y * (n as f64).powf(eps / 2.0)),
        2 => ((1.0 - eps) * ln_n / (2.0 * (1.0 - constants.q1)), law.p(2) * n_eps * y),
        _ => ((1.0 - eps) * ln_n / d as f64, law.p(d as usize) * n_eps * y),
    };
    let (candidates, witnesses) = if d == 1 {
        augmented_witnesses(graph, eps, threshold, k)
    } else {
        let v_star: Vec<usize> = (0..n).filter(|&v| graph.degree(v) == d as usize).collect();
        let slow: Vec<usize> = if d >= 3 {
            v_star
                .iter()
                .copied()
                .filter(|&u| graph.neighbors(u).iter().all(|inc| graph.weight(inc.edge as usize) >= threshold))
                .collect()
        } else {
            v_star.clone()
        };
        let good = clusters(graph, &slow)
            .into_iter()
            .filter(|c| c.degree.is_some_and(|deg| deg <= k) && (d >= 3 || c.radius >= threshold))
            .map(|c| c.anchor)
            .collect();
        (v_star.len(), good)
    };
    Ok(GoodVertices {
        d_min: d,
        epsilon: eps,
        threshold,
        k,
        y,
        expected,
        candidates,
        count: witnesses.len(),
        witnesses,
    })
}

/// Good vertices among the degree-one vertices left when the 2-core peel
/// first has fewer than `n^{1 - eps/2}` of them, measured in the graph
/// augmented by those vertices.
fn augmented_witnesses(graph: &WeightedGraph, eps: f64, threshold: f64, k: u32) -> (usize, Vec<usize>) {
    let n = graph.n();
    let v_star = degree_one_at_stop(graph, (n as f64).powf(1.0 - eps / 2.0));
    let mut mask = vec![false; n];
    for &v in &v_star {
        mask[v] = true;
    }
    let core = k_core(graph, 2, Some(&mask)).expect("k = 2 and a full-length mask");
    let (sub, old_of) = core.subgraph(graph);
    let mut new_of = vec![usize::MAX; n];
    for (i, &v) in old_of.iter().enumerate() {
        new_of[v] = i;
    }
    let anchors: Vec<usize> = v_star.iter().map(|&v| new_of[v]).collect();
    let good = clusters(&sub, &anchors)
        .into_iter()
        .filter(|c| c.degree.is_some_and(|deg| deg <= k) && c.radius >= threshold)
        .map(|c| old_of[c.anchor])
        .collect();
    (v_star.len(), good)
}
