use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::sssp::{SsspWorkspace, UNREACHABLE};
use crate::graph::WeightedGraph;

/// Ball statistics of an exploration from `source`, indexed by step
/// `i = 0..=steps()`. Step 0 is the source itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationTrace {
    pub source: usize,
    pub source_degree: u32,
    /// Vertex added at each step.
    pub vertices: Vec<usize>,
    /// `T_a(i)`.
    pub t: Vec<f64>,
    /// Forward degree of the vertex added at step `i`; 0 at step 0.
    pub d_hat: Vec<u32>,
    pub s_hat: Vec<i64>,
    /// Tree excess of the ball.
    pub x: Vec<i64>,
    /// Half-edges crossing the ball boundary.
    pub s: Vec<i64>,
    pub gamma: Vec<u32>,
    /// The step budget ran out before the component was exhausted.
    pub truncated: bool,
}

impl ExplorationTrace {
    pub(crate) fn start(source: usize, degree: u32, loops: u32) -> Self {
        Self {
            source,
            source_degree: degree,
            vertices: vec![source],
            t: vec![0.0],
            d_hat: vec![0],
            s_hat: vec![degree as i64],
            x: vec![loops as i64],
            s: vec![degree as i64 - 2 * loops as i64],
            gamma: vec![0],
            truncated: false,
        }
    }

    /// Appends step `i` for a vertex of degree `degree` that closes
    /// `back_edges` extra edges into the ball (own loops included).
    pub(crate) fn push(&mut self, vertex: usize, t: f64, degree: u32, back_edges: u32) {
        debug_assert!(back_edges >= 1, "a discovered vertex has its discovery edge");
        let d_hat = degree - 1;
        let s_hat = self.s_hat.last().unwrap() + d_hat as i64 - 1;
        let x = self.x.last().unwrap() + back_edges as i64 - 1;
        self.vertices.push(vertex);
        self.t.push(t);
        self.d_hat.push(d_hat);
        self.s_hat.push(s_hat);
        self.x.push(x);
        self.s.push(s_hat - 2 * x);
        self.gamma.push(self.gamma.last().unwrap() + (d_hat >= 2) as u32);
    }

    /// Number of steps taken.
    pub fn steps(&self) -> usize {
        self.t.len() - 1
    }

    /// `I_a`, the component size minus one; `None` for a truncated trace.
    pub fn i_a(&self) -> Option<usize> {
        (!self.truncated).then(|| self.steps())
    }

    /// `T_a(k)`; infinite past `I_a`, `None` when the trace stopped short.
    pub fn t_at(&self, k: usize) -> Option<f64> {
        match self.t.get(k) {
            Some(&t) => Some(t),
            None if self.truncated => None,
            None => Some(UNREACHABLE),
        }
    }

    /// `S_a(k)`, which stays at `S_a(I_a) = 0` past `I_a`.
    pub fn s_at(&self, k: usize) -> Option<i64> {
        self.extended(&self.s, k)
    }

    /// `gamma_a(k)`, held constant past `I_a`.
    pub fn gamma_at(&self, k: usize) -> Option<u32> {
        self.extended(&self.gamma, k)
    }

    /// `X_a(k)`, held constant past `I_a`.
    pub fn x_at(&self, k: usize) -> Option<i64> {
        self.extended(&self.x, k)
    }

    fn extended<T: Copy>(&self, values: &[T], k: usize) -> Option<T> {
        match values.get(k) {
            Some(&v) => Some(v),
            None if self.truncated => None,
            None => values.last().copied(),
        }
    }

    /// First step at which the ball holds `k` vertices of forward degree at
    /// least two.
    pub fn t_bar_step(&self, k: u32) -> Option<usize> {
        if k == 0 {
            return Some(0);
        }
        self.gamma.iter().position(|&g| g >= k)
    }

    /// `T̄_a(k)`; infinite if the component never reaches `k`, `None` when
    /// truncated first.
    pub fn t_bar(&self, k: u32) -> Option<f64> {
        match self.t_bar_step(k) {
            Some(i) => Some(self.t[i]),
            None if self.truncated => None,
            None => Some(UNREACHABLE),
        }
    }

    /// One `i T d_hat S_hat X S gamma` line per step.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..=self.steps() {
            let _ = writeln!(
                out,
                "{i} {:.17e} {} {} {} {} {}",
                self.t[i], self.d_hat[i], self.s_hat[i], self.x[i], self.s[i], self.gamma[i]
            );
        }
        out
    }
}

/// Grows `B_w(source, t)` on the realized graph in distance order, for at
/// most `max_steps` steps.
pub fn explore_replay(graph: &WeightedGraph, source: usize, max_steps: Option<usize>) -> ExplorationTrace {
    let mut ws = SsspWorkspace::new(graph.n());
    explore_replay_with(&mut ws, graph, source, max_steps, |_| false)
}

/// [`explore_replay`] on a caller-owned workspace; `stop` is checked after
/// every step and ends the trace early (flagged truncated unless the
/// component was exhausted).
pub fn explore_replay_with(
    ws: &mut SsspWorkspace,
    graph: &WeightedGraph,
    source: usize,
    max_steps: Option<usize>,
    mut stop: impl FnMut(&ExplorationTrace) -> bool,
) -> ExplorationTrace {
    let limit = max_steps.map_or(usize::MAX, |s| s.saturating_add(1));
    let mut trace = ExplorationTrace::start(source, graph.degree(source) as u32, graph.loops_at(source) as u32);
    let mut stopped = false;
    ws.run_visit(graph, source, limit, |visit| {
        let v = visit.vertex;
        if visit.index > 0 {
            let mut into_ball = 0u32;
            let mut loop_ends = 0u32;
            for inc in graph.neighbors(v) {
                let w = inc.to as usize;
                if w == v {
                    loop_ends += 1;
                } else if visit.is_settled(w) {
                    into_ball += 1;
                }
            }
            trace.push(v, visit.dist, graph.degree(v) as u32, into_ball + loop_ends / 2);
        }
        if stop(&trace) {
            stopped = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    let exhausted = *trace.s.last().unwrap() == 0;
    trace.truncated = !exhausted && (stopped || trace.vertices.len() == limit);
    trace
}

/// Half-edges joining `ball` to its complement, counted on the graph.
pub fn boundary_half_edges(graph: &WeightedGraph, in_ball: &[bool]) -> i64 {
    let mut count = 0;
    for (u, v, _) in graph.edges() {
        if in_ball[u] != in_ball[v] {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpp::sssp;

    fn weighted(n: usize, edges: &[(u32, u32, f64)]) -> WeightedGraph {
        WeightedGraph::from_edges(
            n,
            edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            Some(edges.iter().map(|&(_, _, w)| w).collect()),
        )
        .unwrap()
    }

    #[test]
    fn star_trace() {
        let g = weighted(4, &[(0, 1, 0.2), (0, 2, 0.5), (0, 3, 0.9)]);
        let tr = explore_replay(&g, 0, None);
        assert_eq!(tr.t, vec![0.0, 0.2, 0.5, 0.9]);
        assert_eq!(tr.s_hat, vec![3, 2, 1, 0]);
        assert_eq!(tr.x, vec![0; 4]);
        assert_eq!(tr.s, tr.s_hat);
        assert_eq!(tr.i_a(), Some(3));
    }

    #[test]
    fn triangle_trace() {
        let g = weighted(3, &[(0, 1, 1.0), (0, 2, 2.0), (1, 2, 4.0)]);
        let tr = explore_replay(&g, 0, None);
        assert_eq!(tr.vertices, vec![0, 1, 2]);
        assert_eq!(tr.t, vec![0.0, 1.0, 2.0]);
        assert_eq!(*tr.x.last().unwrap(), 1);
        assert_eq!(tr.s[2], tr.s_hat[2] - 2);
        assert_eq!(tr.s[2], 0);
        let d = sssp(&g, 0);
        assert_eq!(d.dist[2], 2.0);
    }

    #[test]
    fn source_loops_enter_excess() {
        let g = weighted(2, &[(0, 0, 0.3), (0, 1, 1.0)]);
        let tr = explore_replay(&g, 0, None);
        assert_eq!(tr.x, vec![1, 1]);
        assert_eq!(tr.s, vec![1, 0]);
    }

    #[test]
    fn truncation_and_extension() {
        let g = weighted(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let tr = explore_replay(&g, 0, Some(2));
        assert!(tr.truncated);
        assert_eq!(tr.steps(), 2);
        assert_eq!(tr.t_at(3), None);
        let full = explore_replay(&g, 0, None);
        assert_eq!(full.t_at(9), Some(UNREACHABLE));
        assert_eq!(full.s_at(9), Some(0));
        assert_eq!(full.t_bar(1), Some(UNREACHABLE));
        let exact = explore_replay(&g, 0, Some(3));
        assert!(!exact.truncated);
    }

    #[test]
    fn t_bar_counts_branching_vertices() {
        // 0 - 1 - 2(deg 3) - {3, 4}
        let g = weighted(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.5)]);
        let tr = explore_replay(&g, 0, None);
        assert_eq!(tr.t_bar_step(1), Some(2));
        assert_eq!(tr.t_bar(1), Some(2.0));
        assert_eq!(tr.gamma, vec![0, 0, 1, 1, 1]);
    }
}
