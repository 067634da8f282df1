use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fpp::{explore_replay_with, SsspWorkspace};
use crate::graph::WeightedGraph;

/// Ball around `anchor` grown until it contains a vertex of degree at least
/// three other than the anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCa {
    pub anchor: usize,
    /// In order of distance from the anchor; the terminal vertex is last.
    pub members: Vec<usize>,
    pub terminal: Option<usize>,
    /// Distance from the anchor to the terminal vertex.
    pub radius: f64,
    /// `d_a + d_u - 2`; `None` when the component ran out first.
    pub degree: Option<u32>,
}

impl ClusterCa {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub fn cluster_ca(graph: &WeightedGraph, anchor: usize) -> ClusterCa {
    cluster_ca_with(&mut SsspWorkspace::new(graph.n()), graph, anchor)
}

pub fn cluster_ca_with(ws: &mut SsspWorkspace, graph: &WeightedGraph, anchor: usize) -> ClusterCa {
    let trace = explore_replay_with(ws, graph, anchor, None, |t| *t.gamma.last().unwrap() >= 1);
    let found = *trace.gamma.last().unwrap() >= 1;
    let terminal = found.then(|| *trace.vertices.last().unwrap());
    ClusterCa {
        anchor,
        terminal,
        radius: if found { *trace.t.last().unwrap() } else { f64::INFINITY },
        degree: terminal.map(|u| (graph.degree(anchor) + graph.degree(u) - 2) as u32),
        members: trace.vertices,
    }
}

/// Clusters of every vertex in `anchors`, in input order.
pub fn clusters(graph: &WeightedGraph, anchors: &[usize]) -> Vec<ClusterCa> {
    anchors
        .par_iter()
        .map_init(|| SsspWorkspace::new(graph.n()), |ws, &a| cluster_ca_with(ws, graph, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted(n: usize, edges: &[(u32, u32, f64)]) -> WeightedGraph {
        WeightedGraph::from_edges(
            n,
            edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            Some(edges.iter().map(|&(_, _, w)| w).collect()),
        )
        .unwrap()
    }

    #[test]
    fn pendant_two_path() {
        // a=0 - 1 - u=2, u has two more neighbours.
        let g = weighted(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0), (3, 4, 1.0)]);
        let c = cluster_ca(&g, 0);
        assert_eq!(c.members, vec![0, 1, 2]);
        assert_eq!(c.terminal, Some(2));
        assert_eq!(c.degree, Some(2));
        assert_eq!(c.radius, 2.0);
    }

    #[test]
    fn cubic_anchor_takes_nearest_neighbour() {
        let g = weighted(4, &[(0, 1, 0.3), (0, 2, 0.1), (0, 3, 0.2), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]);
        let c = cluster_ca(&g, 0);
        assert_eq!(c.members, vec![0, 2]);
        assert_eq!(c.degree, Some(4));
    }

    #[test]
    fn path_component_has_no_terminal() {
        let g = weighted(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let c = cluster_ca(&g, 0);
        assert_eq!(c.terminal, None);
        assert_eq!(c.degree, None);
        assert_eq!(c.size(), 3);
        assert!(c.radius.is_infinite());
    }

    #[test]
    fn batch_matches_single() {
        let g = weighted(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0), (3, 4, 1.0)]);
        let all = clusters(&g, &[0, 1, 2, 3, 4]);
        for (a, c) in all.iter().enumerate() {
            assert_eq!(*c, cluster_ca(&g, a));
        }
    }
}
