use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;

/// Distance to vertices not reachable from the source.
pub const UNREACHABLE: f64 = f64::INFINITY;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceVector {
    pub source: usize,
    /// [`UNREACHABLE`] outside the source's component.
    pub dist: Vec<f64>,
    /// Reachable vertices in settling order; `order[0] == source`.
    pub order: Vec<usize>,
}

impl DistanceVector {
    /// Largest finite distance.
    pub fn eccentricity(&self) -> f64 {
        self.order.last().map_or(0.0, |&v| self.dist[v])
    }

    pub fn farthest(&self) -> usize {
        *self.order.last().expect("the source is always settled")
    }
}

/// Exact single-source distances. Equal keys settle in increasing vertex order.
pub fn sssp(graph: &WeightedGraph, source: usize) -> DistanceVector {
    let mut ws = SsspWorkspace::new(graph.n());
    ws.run(graph, source, usize::MAX);
    ws.to_vector(graph.n())
}

/// Heap key; the bit pattern of a non-negative `f64` orders like the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    bits: u64,
    vertex: u32,
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed so the max-heap pops the smallest (dist, vertex).
    fn cmp(&self, other: &Self) -> Ordering {
        (other.bits, other.vertex).cmp(&(self.bits, self.vertex))
    }
}

/// Per-vertex state, stamped with the epoch of the run that wrote it.
#[derive(Clone, Copy, Debug)]
struct Slot {
    dist: f64,
    seen: u32,
    settled: u32,
}

const FRESH: Slot = Slot { dist: UNREACHABLE, seen: 0, settled: 0 };

/// A settled vertex handed to [`SsspWorkspace::run_visit`] callbacks.
pub struct Visit<'a> {
    pub vertex: usize,
    pub dist: f64,
    /// Position in settling order; the source has index 0.
    pub index: usize,
    slots: &'a [Slot],
    epoch: u32,
}

impl Visit<'_> {
    /// Whether `v` was settled before or at this visit.
    pub fn is_settled(&self, v: usize) -> bool {
        self.slots[v].settled == self.epoch
    }
}

/// Reusable Dijkstra state. Epoch stamps make each run `O(reached)` instead
/// of `O(n)`.
#[derive(Clone, Debug)]
pub struct SsspWorkspace {
    slots: Vec<Slot>,
    epoch: u32,
    heap: BinaryHeap<Entry>,
    order: Vec<u32>,
    source: usize,
}

impl SsspWorkspace {
    pub fn new(n: usize) -> Self {
        Self { slots: vec![FRESH; n], epoch: 0, heap: BinaryHeap::new(), order: Vec::new(), source: 0 }
    }

    fn begin(&mut self, n: usize, source: usize) {
        assert!(source < n, "source {source} out of range for n = {n}");
        if self.slots.len() != n {
            *self = Self::new(n);
        }
        if self.epoch == u32::MAX {
            self.slots.fill(FRESH);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.heap.clear();
        self.order.clear();
        self.source = source;
    }

    /// Settles up to `limit` vertices from `source`.
    pub fn run(&mut self, graph: &WeightedGraph, source: usize, limit: usize) {
        self.run_visit(graph, source, limit, |_| ControlFlow::Continue(()));
    }

    /// Settles vertices in order, calling `visit` on each. Stops after
    /// `limit` vertices, when the component is exhausted, or when `visit`
    /// breaks; in the last case the breaking vertex counts as settled.
    pub fn run_visit<F>(&mut self, graph: &WeightedGraph, source: usize, limit: usize, mut visit: F)
    where
        F: FnMut(Visit<'_>) -> ControlFlow<()>,
    {
        self.begin(graph.n(), source);
        let epoch = self.epoch;
        self.slots[source] = Slot { dist: 0.0, seen: epoch, settled: 0 };
        self.heap.push(Entry { bits: 0.0f64.to_bits(), vertex: source as u32 });
        while let Some(Entry { bits, vertex }) = self.heap.pop() {
            let v = vertex as usize;
            let dist = f64::from_bits(bits);
            let slot = &mut self.slots[v];
            if slot.settled == epoch || dist > slot.dist {
                continue;
            }
            if self.order.len() >= limit {
                break;
            }
            slot.settled = epoch;
            self.order.push(vertex);
            let flow = visit(Visit {
                vertex: v,
                dist,
                index: self.order.len() - 1,
                slots: &self.slots,
                epoch,
            });
            if flow.is_break() {
                break;
            }
            debug_assert!(dist.is_finite());
            let (incs, weights) = graph.weighted_neighbors(v);
            for (inc, &w_e) in incs.iter().zip(weights) {
                let w = inc.to as usize;
                let slot = &mut self.slots[w];
                if w == v || slot.settled == epoch {
                    continue;
                }
                let nd = dist + w_e;
                if slot.seen != epoch || nd < slot.dist {
                    slot.seen = epoch;
                    slot.dist = nd;
                    self.heap.push(Entry { bits: nd.to_bits(), vertex: inc.to });
                }
            }
        }
    }

    /// Distance from the last run; [`UNREACHABLE`] if `v` was never reached.
    /// Tentative for reached but unsettled vertices of a limited run.
    pub fn dist(&self, v: usize) -> f64 {
        let slot = &self.slots[v];
        if slot.seen == self.epoch {
            slot.dist
        } else {
            UNREACHABLE
        }
    }

    pub fn is_settled(&self, v: usize) -> bool {
        self.slots[v].settled == self.epoch
    }

    /// Settled vertices of the last run in order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Largest settled distance of the last run.
    pub fn eccentricity(&self) -> f64 {
        self.order.last().map_or(0.0, |&v| self.slots[v as usize].dist)
    }

    pub fn to_vector(&self, n: usize) -> DistanceVector {
        let dist = (0..n)
            .map(|v| if self.is_settled(v) { self.slots[v].dist } else { UNREACHABLE })
            .collect();
        DistanceVector {
            source: self.source,
            dist,
            order: self.order.iter().map(|&v| v as usize).collect(),
        }
    }
}
