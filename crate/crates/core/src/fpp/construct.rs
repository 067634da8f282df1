//! Simultaneous construction of a configuration-model graph and the ball
//! around a source, driven by exponential clocks on the unmatched
//! half-edges of the ball.

use rand::seq::SliceRandom;
use rand::Rng;

use super::trace::ExplorationTrace;
use crate::degree::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::{exp1, half_edge_owners, WeightedGraph};

const NOT_IN_POOL: u32 = u32::MAX;

/// Graph revealed so far by [`explore_construct`].
#[derive(Clone, Debug)]
pub struct PartialGraph {
    n: usize,
    owner: Vec<u32>,
    /// `(half-edge, half-edge, weight)` in reveal order.
    edges: Vec<(u32, u32, f64)>,
    /// Unmatched half-edges of the ball with their arrival times.
    list: Vec<(u32, f64)>,
    /// Unmatched half-edges of vertices outside the ball.
    pool: Vec<u32>,
    pos: Vec<u32>,
    first: Vec<u32>,
    in_ball: Vec<bool>,
    matched: usize,
    time: f64,
    /// Pairs matched inside the list once no outside half-edge was left.
    terminal_pairs: usize,
}

impl PartialGraph {
    fn new(seq: &DegreeSequence) -> Self {
        let owner = half_edge_owners(seq);
        let m = owner.len();
        let mut first = Vec::with_capacity(seq.n() + 1);
        let mut acc = 0u32;
        for &d in seq.degrees() {
            first.push(acc);
            acc += d;
        }
        first.push(acc);
        Self {
            n: seq.n(),
            owner,
            edges: Vec::new(),
            list: Vec::new(),
            pool: (0..m as u32).collect(),
            pos: (0..m as u32).collect(),
            first,
            in_ball: vec![false; seq.n()],
            matched: 0,
            time: 0.0,
            terminal_pairs: 0,
        }
    }

    fn take_from_pool(&mut self, h: u32) {
        let i = self.pos[h as usize];
        debug_assert_ne!(i, NOT_IN_POOL);
        let last = *self.pool.last().unwrap();
        self.pool.swap_remove(i as usize);
        if last != h {
            self.pos[last as usize] = i;
        }
        self.pos[h as usize] = NOT_IN_POOL;
    }

    fn total_half_edges(&self) -> usize {
        self.owner.len()
    }

    fn half_edges_of(&self, v: usize) -> std::ops::Range<u32> {
        self.first[v]..self.first[v + 1]
    }

    /// Brings `v` into the ball at the current time. `entry` is the half-edge
    /// through which `v` is reached, already matched. Returns the number of
    /// edges closed back into the ball, own loops included.
    fn absorb<R: Rng + ?Sized>(&mut self, v: usize, entry: Option<u32>, rng: &mut R) -> u32 {
        self.in_ball[v] = true;
        for h in self.half_edges_of(v) {
            if self.pos[h as usize] != NOT_IN_POOL {
                self.take_from_pool(h);
            }
        }
        let now = self.time;
        let mut back = 0;
        for g in self.half_edges_of(v) {
            if Some(g) == entry {
                continue;
            }
            let others = self.total_half_edges() - self.matched - 1;
            let p = self.list.len() as f64 / others as f64;
            if rng.random::<f64>() < p {
                let j = rng.random_range(0..self.list.len());
                let (h, arrival) = self.list.swap_remove(j);
                self.edges.push((g, h, (now - arrival) + exp1(rng)));
                self.matched += 2;
                back += 1;
            } else {
                self.list.push((g, now));
            }
        }
        back
    }

    /// Unmatched half-edges of the ball; equals `S` of the trace.
    pub fn boundary(&self) -> usize {
        self.list.len()
    }

    pub fn in_ball(&self, v: usize) -> bool {
        self.in_ball[v]
    }

    pub fn revealed_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b, w)| (self.owner[a as usize] as usize, self.owner[b as usize] as usize, w))
    }

    pub fn terminal_pairs(&self) -> usize {
        self.terminal_pairs
    }

    /// Matches every remaining half-edge: list half-edges go to uniform
    /// outside half-edges with weights exceeding the time already elapsed on
    /// them, then the outside half-edges pair uniformly with `Exp(1)` weights.
    pub fn complete<R: Rng + ?Sized>(mut self, rng: &mut R) -> WeightedGraph {
        let now = self.time;
        let list = std::mem::take(&mut self.list);
        let mut pending: Vec<(u32, f64)> = Vec::new();
        for (h, arrival) in list {
            if self.pool.is_empty() {
                pending.push((h, arrival));
                continue;
            }
            let j = rng.random_range(0..self.pool.len());
            let g = self.pool[j];
            self.take_from_pool(g);
            self.edges.push((h, g, (now - arrival) + exp1(rng)));
        }
        pending.shuffle(rng);
        for pair in pending.chunks_exact(2) {
            let earliest = pair[0].1.min(pair[1].1);
            self.edges.push((pair[0].0, pair[1].0, (now - earliest) + exp1(rng)));
        }
        let mut rest = std::mem::take(&mut self.pool);
        rest.shuffle(rng);
        for pair in rest.chunks_exact(2) {
            self.edges.push((pair[0], pair[1], exp1(rng)));
        }
        let (endpoints, weights) = self
            .edges
            .iter()
            .map(|&(a, b, w)| ((self.owner[a as usize], self.owner[b as usize]), w))
            .unzip();
        WeightedGraph::from_edges(self.n, endpoints, Some(weights)).expect("a full matching is a valid graph")
    }
}

#[derive(Clone, Debug)]
pub struct ConstructedExploration {
    pub trace: ExplorationTrace,
    pub partial: PartialGraph,
}

/// Runs the list exploration from `source` for at most `horizon` steps.
///
/// Each step waits `Exp(|L|)`, removes a uniform half-edge of `L`, and
/// matches it to a uniform unmatched half-edge outside the ball. Each
/// further half-edge of the new vertex joins a uniform member of `L` with
/// probability `|L| / (m - 2x - 1)` and is appended to `L` otherwise.
pub fn explore_construct<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    source: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<ConstructedExploration> {
    let n = seq.n();
    if source >= n {
        return Err(Error::InvalidArgument(format!("source {source} out of range for n = {n}")));
    }
    if horizon > n - 1 {
        return Err(Error::InvalidArgument(format!("horizon {horizon} exceeds n - 1 = {}", n - 1)));
    }
    let mut g = PartialGraph::new(seq);
    let loops = g.absorb(source, None, rng);
    let mut trace = ExplorationTrace::start(source, seq.degrees()[source], loops);
    while !g.list.is_empty() {
        if g.pool.is_empty() {
            close_list(&mut g, &mut trace, rng);
            break;
        }
        if trace.steps() == horizon {
            trace.truncated = true;
            break;
        }
        g.time += exp1(rng) / g.list.len() as f64;
        let j = rng.random_range(0..g.list.len());
        let (h_i, arrival) = g.list.swap_remove(j);
        let h = g.pool[rng.random_range(0..g.pool.len())];
        let v = g.owner[h as usize] as usize;
        g.edges.push((h_i, h, g.time - arrival));
        g.matched += 2;
        let back = g.absorb(v, Some(h), rng);
        trace.push(v, g.time, seq.degrees()[v], back + 1);
        debug_assert_eq!(*trace.s.last().unwrap(), g.list.len() as i64);
    }
    Ok(ConstructedExploration { trace, partial: g })
}

/// Every vertex is in the ball yet `L` is not empty: pair `L` internally
/// and book the pairs as excess of the final step.
fn close_list<R: Rng + ?Sized>(g: &mut PartialGraph, trace: &mut ExplorationTrace, rng: &mut R) {
    let now = g.time;
    let mut list = std::mem::take(&mut g.list);
    list.shuffle(rng);
    for pair in list.chunks_exact(2) {
        let earliest = pair[0].1.min(pair[1].1);
        g.edges.push((pair[0].0, pair[1].0, (now - earliest) + exp1(rng)));
        g.matched += 2;
        g.terminal_pairs += 1;
    }
    let pairs = g.terminal_pairs as i64;
    *trace.x.last_mut().unwrap() += pairs;
    *trace.s.last_mut().unwrap() -= 2 * pairs;
}
