//! Random graph generators.

use std::collections::HashSet;

use rand::distr::Open01;
use rand::seq::SliceRandom;
use rand::Rng;

use super::weighted::WeightedGraph;
use crate::degree::DegreeSequence;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

/// Uniform perfect matching of the half-edges of `seq`, as an unweighted
/// multigraph. Edge `j` joins the half-edges at shuffled positions `2j`
/// and `2j + 1`.
pub fn sample_multigraph<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> WeightedGraph {
    let mut half_edges = half_edge_owners(seq);
    half_edges.shuffle(rng);
    let endpoints = half_edges.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    WeightedGraph::from_edges(seq.n(), endpoints, None).expect("owners are in range")
}

pub(crate) fn half_edge_owners(seq: &DegreeSequence) -> Vec<u32> {
    let mut owners = Vec::with_capacity(seq.total_degree() as usize);
    for (v, &d) in seq.degrees().iter().enumerate() {
        owners.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    owners
}

#[derive(Clone, Debug)]
pub struct SimpleSample {
    pub graph: WeightedGraph,
    /// Multigraphs drawn, including the accepted one.
    pub attempts: usize,
}

impl SimpleSample {
    pub fn acceptance_rate(&self) -> f64 {
        1.0 / self.attempts as f64
    }
}

/// Rejection sampler for the uniform simple graph with degrees `seq`.
pub fn sample_simple<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    max_attempts: usize,
) -> Result<SimpleSample> {
    for attempts in 1..=max_attempts {
        let graph = sample_multigraph(seq, rng);
        if graph.is_simple() {
            return Ok(SimpleSample { graph, attempts });
        }
    }
    Err(Error::RejectionFailure {
        attempts: max_attempts,
        acceptance_upper_bound: 1.0 / max_attempts as f64,
    })
}

/// Replaces every weight by an independent `Exp(1)` draw `-ln U`, in edge-id order.
pub fn assign_weights<R: Rng + ?Sized>(graph: &WeightedGraph, rng: &mut R) -> WeightedGraph {
    let weights = (0..graph.m()).map(|_| exp1(rng)).collect();
    graph.with_weights(weights).expect("exponential draws are positive")
}

/// `-ln U` with `U` uniform on the open interval, so the result is finite and positive.
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

/// Erdős–Rényi `G(n, p)` by geometric skipping over the pair sequence.
pub fn sample_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<WeightedGraph> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside (0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut endpoints = Vec::new();
    if p == 1.0 {
        for v in 1..n as u32 {
            endpoints.extend((0..v).map(|w| (v, w)));
        }
    } else {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let u: f64 = rng.sample(Open01);
            w += 1 + (u.ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                endpoints.push((v as u32, w as u32));
            }
        }
    }
    WeightedGraph::from_edges(n, endpoints, None)
}

/// Erdős–Rényi `G(n, m)`: a uniform `m`-subset of pairs by Floyd's
/// algorithm, with edges listed in pair order.
pub fn sample_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let pairs = n as u64 * (n as u64 - 1) / 2;
    if m as u64 > pairs {
        return Err(Error::InvalidArgument(format!("{m} edges exceed the {pairs} vertex pairs")));
    }
    let mut chosen: HashSet<u64> = HashSet::with_capacity(m);
    for j in pairs - m as u64..pairs {
        let t = rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let mut keys: Vec<u64> = chosen.into_iter().collect();
    keys.sort_unstable();
    let endpoints = keys.into_iter().map(pair_of_index).collect();
    WeightedGraph::from_edges(n, endpoints, None)
}

/// Inverse of `k = v(v-1)/2 + w` for `w < v`.
fn pair_of_index(k: u64) -> (u32, u32) {
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (v as u32, (k - v * (v - 1) / 2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    #[test]
    fn single_matchings() {
        let g = sample_multigraph(&DegreeSequence::new(vec![1, 1]).unwrap(), &mut rng(1));
        assert_eq!(g.edges().map(|(u, v, _)| (u.min(v), u.max(v))).collect::<Vec<_>>(), vec![(0, 1)]);
        let g = sample_multigraph(&DegreeSequence::new(vec![2]).unwrap(), &mut rng(1));
        assert_eq!(g.self_loop_count(), 1);
    }

    #[test]
    fn degrees_preserved() {
        let seq = DegreeSequence::new(vec![3, 1, 4, 1, 5, 2, 2]).unwrap();
        let g = sample_multigraph(&seq, &mut rng(9));
        assert_eq!(g.degrees(), seq.degrees());
    }

    #[test]
    fn triangle_is_only_simple_two_regular() {
        let seq = DegreeSequence::new(vec![2, 2, 2]).unwrap();
        let s = sample_simple(&seq, &mut rng(4), 1000).unwrap();
        assert!(s.graph.is_simple());
        assert_eq!(s.graph.m(), 3);
    }

    #[test]
    fn impossible_simple_graph_fails() {
        let seq = DegreeSequence::new(vec![2]).unwrap();
        match sample_simple(&seq, &mut rng(4), 50) {
            Err(Error::RejectionFailure { attempts, .. }) => assert_eq!(attempts, 50),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weights_are_deterministic_and_positive() {
        let g = sample_multigraph(&DegreeSequence::new(vec![3, 3, 3, 3]).unwrap(), &mut rng(2));
        let a = assign_weights(&g, &mut rng(5));
        let b = assign_weights(&g, &mut rng(5));
        assert_eq!(a.weights(), b.weights());
        assert!(a.weights().iter().all(|&w| w > 0.0));
        assert!(a.is_weighted() && !g.is_weighted());
    }

    #[test]
    fn gnp_full_and_gnm_complete() {
        let g = sample_gnp(2, 1.0, &mut rng(1)).unwrap();
        assert_eq!(g.m(), 1);
        let k4 = sample_gnm(4, 6, &mut rng(1)).unwrap();
        assert!(k4.is_simple());
        assert_eq!(k4.degrees(), vec![3, 3, 3, 3]);
        assert!(sample_gnm(4, 7, &mut rng(1)).is_err());
        assert!(sample_gnp(4, 0.0, &mut rng(1)).is_err());
    }

    #[test]
    fn pair_index_roundtrip() {
        let mut k = 0;
        for v in 1..60u64 {
            for w in 0..v {
                assert_eq!(pair_of_index(k), (v as u32, w as u32));
                k += 1;
            }
        }
    }

    #[test]
    fn gnp_is_simple_with_expected_density() {
        let n = 2000;
        let g = sample_gnp(n, 3.0 / n as f64, &mut rng(11)).unwrap();
        assert!(g.is_simple());
        let mean = 2.0 * g.m() as f64 / n as f64;
        assert!((mean - 3.0).abs() < 0.2, "{mean}");
    }
}
