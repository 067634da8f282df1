//! Hierarchical seed derivation.
//!
//! A [`Seed`] is a master value plus a path of `(tag, index)` labels. Each
//! label is folded into the running state with splitmix64, so sibling paths
//! give independent ChaCha streams and equal paths give identical ones.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const TAG_TOPOLOGY: &str = "topology";
pub const TAG_WEIGHTS: &str = "weights";
pub const TAG_FLOOD: &str = "flood";
pub const TAG_TRIAL: &str = "trial";
pub const TAG_SIZE: &str = "n";
pub const TAG_SOURCES: &str = "sources";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    master: u64,
    path: Vec<(String, u64)>,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Self { master, path: Vec::new() }
    }

    /// Child seed one label deeper.
    pub fn derive(&self, tag: &str, index: u64) -> Self {
        let mut path = self.path.clone();
        path.push((tag.to_owned(), index));
        Self { master: self.master, path }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn path(&self) -> &[(String, u64)] {
        &self.path
    }

    /// The 64-bit value the stream is keyed by.
    pub fn value(&self) -> u64 {
        let mut state = splitmix64(self.master);
        for (tag, index) in &self.path {
            state = splitmix64(state ^ fnv1a(tag.as_bytes()));
            state = splitmix64(state ^ *index);
        }
        state
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.value())
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.master)?;
        for (tag, index) in &self.path {
            write!(f, "/{tag}:{index}")?;
        }
        Ok(())
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}
