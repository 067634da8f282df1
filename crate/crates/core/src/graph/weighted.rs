use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One end of an edge as seen from a vertex. A self-loop appears twice in
/// its vertex's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub to: u32,
    pub edge: u32,
}

/// Immutable undirected multigraph with one positive weight per edge.
///
/// Edge ids are positions in the edge list. Adjacency is stored in CSR form
/// with each vertex's incidences in edge-id order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    endpoints: Vec<(u32, u32)>,
    weights: Vec<f64>,
    weighted: bool,
    offsets: Vec<usize>,
    incidences: Vec<Incidence>,
    /// Weight of each incidence's edge, aligned with `incidences`.
    arc_weights: Vec<f64>,
    self_loops: usize,
    multi_edges: usize,
}

/// Connected components; labels are numbered in order of their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<u32>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Label of the largest component, smallest label on ties.
    pub fn giant(&self) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        for (c, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|(bs, _)| s > bs) {
                best = Some((s, c as u32));
            }
        }
        best.map(|(_, c)| c)
    }

    pub fn giant_size(&self) -> usize {
        self.giant().map_or(0, |c| self.sizes[c as usize])
    }

    pub fn members(&self, c: u32) -> Vec<usize> {
        (0..self.label.len()).filter(|&v| self.label[v] == c).collect()
    }
}

impl WeightedGraph {
    /// Builds a graph; without `weights` every edge gets weight 1 and the
    /// graph is flagged unweighted.
    pub fn from_edges(n: usize, endpoints: Vec<(u32, u32)>, weights: Option<Vec<f64>>) -> Result<Self> {
        if n > u32::MAX as usize || endpoints.len() > u32::MAX as usize {
            return Err(Error::InvalidArgument("graph too large for 32-bit ids".into()));
        }
        if let Some(&(u, v)) = endpoints.iter().find(|&&(u, v)| u as usize >= n || v as usize >= n) {
            return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range for n = {n}")));
        }
        let (weights, weighted) = match weights {
            Some(w) => {
                check_weights(&w, endpoints.len())?;
                (w, true)
            }
            None => (vec![1.0; endpoints.len()], false),
        };
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &endpoints {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidences = vec![Incidence { to: 0, edge: 0 }; offsets[n]];
        let mut self_loops = 0;
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            let e = e as u32;
            incidences[fill[u as usize]] = Incidence { to: v, edge: e };
            fill[u as usize] += 1;
            incidences[fill[v as usize]] = Incidence { to: u, edge: e };
            fill[v as usize] += 1;
            if u == v {
                self_loops += 1;
            }
        }
        let mut graph = Self {
            n,
            endpoints,
            weights,
            weighted,
            offsets,
            incidences,
            arc_weights: Vec::new(),
            self_loops,
            multi_edges: 0,
        };
        graph.multi_edges = graph.count_multi_edges();
        graph.arc_weights = graph.incidences.iter().map(|i| graph.weights[i.edge as usize]).collect();
        Ok(graph)
    }

    /// Redundant parallel edges: for each unordered pair of distinct vertices,
    /// edge multiplicity minus one.
    fn count_multi_edges(&self) -> usize {
        let mut scratch = Vec::new();
        let mut twice = 0;
        for v in 0..self.n {
            scratch.clear();
            scratch.extend(self.neighbors(v).iter().map(|i| i.to).filter(|&w| w as usize != v));
            scratch.sort_unstable();
            twice += scratch.windows(2).filter(|w| w[0] == w[1]).count();
        }
        twice / 2
    }

    /// Same topology with new weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, self.m())?;
        let arc_weights = self.incidences.iter().map(|i| weights[i.edge as usize]).collect();
        Ok(Self { weights, arc_weights, weighted: true, ..self.clone() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.endpoints.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.n).map(|v| self.degree(v) as u32).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[Incidence] {
        &self.incidences[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Incidences of `v` with their edge weights, for traversal loops.
    pub fn weighted_neighbors(&self, v: usize) -> (&[Incidence], &[f64]) {
        let r = self.offsets[v]..self.offsets[v + 1];
        (&self.incidences[r.clone()], &self.arc_weights[r])
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.endpoints[e];
        (u as usize, v as usize)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.endpoints.iter().zip(&self.weights).map(|(&(u, v), &w)| (u as usize, v as usize, w))
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn self_loop_count(&self) -> usize {
        self.self_loops
    }

    pub fn multi_edge_count(&self) -> usize {
        self.multi_edges
    }

    pub fn has_self_loops(&self) -> bool {
        self.self_loops > 0
    }

    pub fn has_multi_edges(&self) -> bool {
        self.multi_edges > 0
    }

    pub fn is_simple(&self) -> bool {
        self.self_loops == 0 && self.multi_edges == 0
    }

    /// Self-loops at `v`.
    pub fn loops_at(&self, v: usize) -> usize {
        self.neighbors(v).iter().filter(|i| i.to as usize == v).count() / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Vertex counts by degree.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_degree() + 1];
        for v in 0..self.n {
            hist[self.degree(v)] += 1;
        }
        hist
    }

    pub fn components(&self) -> Components {
        const UNSEEN: u32 = u32::MAX;
        let mut label = vec![UNSEEN; self.n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != UNSEEN {
                continue;
            }
            let c = sizes.len() as u32;
            label[s] = c;
            stack.push(s);
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for inc in self.neighbors(v) {
                    let w = inc.to as usize;
                    if label[w] == UNSEEN {
                        label[w] = c;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        Components { label, sizes }
    }

    /// Subgraph induced by `keep`, with vertices renumbered in increasing
    /// order. Returns the graph and the new-to-old vertex map.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Self, Vec<usize>) {
        assert_eq!(keep.len(), self.n, "mask length must equal vertex count");
        let old_of: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_of = vec![u32::MAX; self.n];
        for (i, &v) in old_of.iter().enumerate() {
            new_of[v] = i as u32;
        }
        let mut endpoints = Vec::new();
        let mut weights = Vec::new();
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            if keep[u as usize] && keep[v as usize] {
                endpoints.push((new_of[u as usize], new_of[v as usize]));
                weights.push(self.weights[e]);
            }
        }
        let sub = Self::from_edges(old_of.len(), endpoints, Some(weights))
            .expect("a subgraph of a valid graph is valid");
        (Self { weighted: self.weighted, ..sub }, old_of)
    }

    /// Drops degree-0 vertices; returns the graph and the new-to-old map.
    pub fn without_isolated(&self) -> (Self, Vec<usize>) {
        let keep: Vec<bool> = (0..self.n).map(|v| self.degree(v) > 0).collect();
        self.induced_subgraph(&keep)
    }
}

fn check_weights(weights: &[f64], m: usize) -> Result<()> {
    if weights.len() != m {
        return Err(Error::InvalidArgument(format!("{} weights for {m} edges", weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidArgument(format!("edge weight {w} is not positive and finite")));
    }
    Ok(())
}
