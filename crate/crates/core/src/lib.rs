//! First-passage percolation on configuration-model random graphs with
//! i.i.d. rate-one exponential edge weights.

pub mod degree;
pub mod graph;
pub mod fpp;
pub mod peel;
pub mod branching;
pub mod stats;
pub mod sweep;
pub mod error;

pub use error::{Error, Result};
