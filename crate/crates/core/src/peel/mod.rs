//! k-cores, augmented 2-cores, minimum-degree clusters and good vertices.

mod cluster;
mod good;
mod kcore;

pub use cluster::{cluster_ca, cluster_ca_with, clusters, ClusterCa};
pub use good::{cluster_degree_cap, count_good_vertices, GoodVertices};
pub use kcore::{core_statistics, degree_one_at_stop, k_core, CoreResult, CoreStatistics, PeelStop};
