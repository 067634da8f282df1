use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Outcome of peeling a graph down to its (augmented) `k`-core.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreResult {
    pub k: u32,
    pub in_core: Vec<bool>,
    /// Degree inside the core; 0 for removed vertices.
    pub core_degree: Vec<u32>,
    /// Ids of edges with both ends in the core.
    pub edges: Vec<usize>,
    /// Removed vertices in removal order.
    pub peel_order: Vec<usize>,
}

impl CoreResult {
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.in_core.len()).filter(|&v| self.in_core[v]).collect()
    }

    pub fn size(&self) -> usize {
        self.in_core.len() - self.peel_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Core vertex counts indexed by core degree.
    pub fn degree_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for v in 0..self.in_core.len() {
            if self.in_core[v] {
                let d = self.core_degree[v] as usize;
                if counts.len() <= d {
                    counts.resize(d + 1, 0);
                }
                counts[d] += 1;
            }
        }
        counts
    }

    pub fn subgraph(&self, graph: &WeightedGraph) -> (WeightedGraph, Vec<usize>) {
        graph.induced_subgraph(&self.in_core)
    }
}

/// When to stop a 2-core peel early.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PeelStop {
    /// Peel to the fixed point.
    Never,
    /// Stop as soon as fewer than this many vertices have degree one.
    DegreeOneBelow(f64),
}

/// Largest subgraph in which every vertex outside `keep` has degree at
/// least `k`; `keep = None` means no protected vertex. Self-loops count twice.
pub fn k_core(graph: &WeightedGraph, k: u32, keep: Option<&[bool]>) -> Result<CoreResult> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("core order k = {k} must be at least 2")));
    }
    if let Some(w) = keep {
        if w.len() != graph.n() {
            return Err(Error::InvalidArgument("protected-set mask length differs from n".into()));
        }
    }
    let mut peel = Peel::new(graph, k, keep);
    peel.run(PeelStop::Never);
    Ok(peel.finish())
}

/// Runs the plain 2-core peel until fewer than `threshold` vertices have
/// degree one and returns those vertices, or every degree-one vertex left at
/// the fixed point when the count never drops that low.
pub fn degree_one_at_stop(graph: &WeightedGraph, threshold: f64) -> Vec<usize> {
    let mut peel = Peel::new(graph, 2, None);
    peel.run(PeelStop::DegreeOneBelow(threshold));
    (0..graph.n()).filter(|&v| peel.alive[v] && peel.degree[v] == 1).collect()
}

struct Peel<'g> {
    graph: &'g WeightedGraph,
    k: u32,
    protected: Vec<bool>,
    alive: Vec<bool>,
    degree: Vec<u32>,
    queued: Vec<bool>,
    queue: VecDeque<usize>,
    order: Vec<usize>,
    degree_one: usize,
}

impl<'g> Peel<'g> {
    fn new(graph: &'g WeightedGraph, k: u32, keep: Option<&[bool]>) -> Self {
        let n = graph.n();
        let protected = keep.map_or_else(|| vec![false; n], <[bool]>::to_vec);
        let degree: Vec<u32> = graph.degrees();
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if !protected[v] && degree[v] < k {
                queued[v] = true;
                queue.push_back(v);
            }
        }
        let degree_one = degree.iter().filter(|&&d| d == 1).count();
        Self { graph, k, protected, alive: vec![true; n], degree, queued, queue, order: Vec::new(), degree_one }
    }

    fn run(&mut self, stop: PeelStop) {
        let below = |count: usize| matches!(stop, PeelStop::DegreeOneBelow(t) if (count as f64) < t);
        if below(self.degree_one) {
            return;
        }
        while let Some(v) = self.queue.pop_front() {
            self.remove(v);
            if below(self.degree_one) {
                return;
            }
        }
    }

    fn remove(&mut self, v: usize) {
        self.alive[v] = false;
        if self.degree[v] == 1 {
            self.degree_one -= 1;
        }
        self.order.push(v);
        for inc in self.graph.neighbors(v) {
            let w = inc.to as usize;
            if w == v || !self.alive[w] {
                continue;
            }
            let d = &mut self.degree[w];
            match *d {
                1 => self.degree_one -= 1,
                2 => self.degree_one += 1,
                _ => {}
            }
            *d -= 1;
            if *d < self.k && !self.queued[w] && !self.protected[w] {
                self.queued[w] = true;
                self.queue.push_back(w);
            }
        }
        self.degree[v] = 0;
    }

    fn finish(self) -> CoreResult {
        let edges = (0..self.graph.m())
            .filter(|&e| {
                let (u, v) = self.graph.endpoints(e);
                self.alive[u] && self.alive[v]
            })
            .collect();
        CoreResult { k: self.k, in_core: self.alive, core_degree: self.degree, edges, peel_order: self.order }
    }
}

/// Empirical counterparts of the limiting 2-core statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreStatistics {
    /// `v(core) / n`.
    pub size_ratio: f64,
    /// `e(core) / n`.
    pub edge_ratio: f64,
    pub degree_histogram: Vec<usize>,
    /// Size-biased mass at one of the core degrees, `2 u_2 / sum of degrees`.
    pub q1_tilde: f64,
    pub empty: bool,
}

pub fn core_statistics(core: &CoreResult, n: usize) -> CoreStatistics {
    let histogram = core.degree_counts();
    let total: usize = histogram.iter().enumerate().map(|(d, &c)| d * c).sum();
    if core.is_empty() || total == 0 {
        return CoreStatistics {
            size_ratio: 0.0,
            edge_ratio: 0.0,
            degree_histogram: histogram,
            q1_tilde: 0.0,
            empty: true,
        };
    }
    let u2 = histogram.get(2).copied().unwrap_or(0);
    CoreStatistics {
        size_ratio: core.size() as f64 / n as f64,
        edge_ratio: core.edges.len() as f64 / n as f64,
        degree_histogram: histogram,
        q1_tilde: 2.0 * u2 as f64 / total as f64,
        empty: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> WeightedGraph {
        WeightedGraph::from_edges(n, edges.to_vec(), None).unwrap()
    }

    #[test]
    fn cycle_is_its_own_core() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let c = k_core(&g, 2, None).unwrap();
        assert_eq!(c.size(), 5);
        assert_eq!(c.edges.len(), 5);
        assert!(c.peel_order.is_empty());
    }

    #[test]
    fn path_has_empty_core() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let c = k_core(&g, 2, None).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.peel_order, vec![0, 2, 1]);
        assert!(core_statistics(&c, 3).empty);
    }

    #[test]
    fn augmentation_keeps_pendant_path() {
        // C4 on 0..4, pendant path 0 - 4 - 5.
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)]);
        assert_eq!(k_core(&g, 2, None).unwrap().vertices(), vec![0, 1, 2, 3]);
        let mut w = vec![false; 6];
        w[5] = true;
        let c = k_core(&g, 2, Some(&w)).unwrap();
        assert_eq!(c.vertices(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(c.core_degree[5], 1);
    }

    #[test]
    fn self_loop_counts_twice() {
        let g = graph(2, &[(0, 0), (0, 1)]);
        let c = k_core(&g, 2, None).unwrap();
        assert_eq!(c.vertices(), vec![0]);
        assert_eq!(c.core_degree[0], 2);
    }

    #[test]
    fn rejects_small_k() {
        let g = graph(2, &[(0, 1)]);
        assert!(k_core(&g, 1, None).is_err());
    }

    #[test]
    fn three_core_of_k4_plus_tail() {
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]);
        let c = k_core(&g, 3, None).unwrap();
        assert_eq!(c.vertices(), vec![0, 1, 2, 3]);
        assert_eq!(c.degree_counts(), vec![0, 0, 0, 4]);
    }

    #[test]
    fn stop_returns_current_degree_one_set() {
        // Two pendant paths on a triangle.
        let g = graph(7, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (1, 5), (5, 6)]);
        assert_eq!(degree_one_at_stop(&g, 3.0), vec![4, 6]);
        assert_eq!(degree_one_at_stop(&g, 2.0), vec![5]);
        assert!(degree_one_at_stop(&g, 0.5).is_empty());
    }

    #[test]
    fn statistics_of_theta_graph() {
        // Two degree-3 vertices joined by three paths.
        let g = graph(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]);
        let c = k_core(&g, 2, None).unwrap();
        let s = core_statistics(&c, 10);
        assert_eq!(s.size_ratio, 0.5);
        assert_eq!(s.edge_ratio, 0.6);
        assert!((s.q1_tilde - 0.5).abs() < 1e-15);
    }
}
