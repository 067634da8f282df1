use rand::Rng;
use serde::{Deserialize, Serialize};

use super::process::{blocks, OffspringLaw};
use crate::error::{Error, Result};
use crate::graph::Seed;

pub const DEFAULT_SKELETON_DEPTH: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonEstimate {
    pub depth: usize,
    pub runs: u64,
    /// Roots with a line reaching generation `depth`.
    pub surviving: u64,
    /// Surviving roots with exactly one surviving child.
    pub single: u64,
    pub estimate: f64,
    pub standard_error: f64,
}

/// Estimates the probability that a surviving particle has exactly one
/// surviving child, where a line survives when it reaches generation `depth`.
pub fn skeleton_single_child_prob(law: &OffspringLaw, runs: u64, depth: usize, seed: &Seed) -> Result<SkeletonEstimate> {
    if !law.is_supercritical() {
        return Err(Error::InvalidArgument(format!("offspring mean {} is not above 1", law.mean())));
    }
    if depth == 0 || runs == 0 {
        return Err(Error::InvalidArgument("need depth >= 1 and runs >= 1".into()));
    }
    let (surviving, single) = blocks(runs, seed, |rng, count| {
        let mut alive = 0u64;
        let mut one = 0u64;
        for _ in 0..count {
            let children = law.sample(rng);
            let lines = (0..children).filter(|_| reaches(law, depth - 1, rng)).count();
            alive += (lines >= 1) as u64;
            one += (lines == 1) as u64;
        }
        (alive, one)
    })
    .into_iter()
    .fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
    let estimate = if surviving > 0 { single as f64 / surviving as f64 } else { f64::NAN };
    Ok(SkeletonEstimate {
        depth,
        runs,
        surviving,
        single,
        estimate,
        standard_error: (estimate * (1.0 - estimate) / surviving.max(1) as f64).sqrt(),
    })
}

/// Whether a particle has a descendant `remaining` generations below it.
fn reaches<R: Rng + ?Sized>(law: &OffspringLaw, remaining: usize, rng: &mut R) -> bool {
    if remaining == 0 {
        return true;
    }
    let children = law.sample(rng);
    (0..children).any(|_| reaches(law, remaining - 1, rng))
}

/// Estimates at `depth` and `2 depth` from independent streams.
pub fn skeleton_with_doubling(
    law: &OffspringLaw,
    runs: u64,
    depth: usize,
    seed: &Seed,
) -> Result<(SkeletonEstimate, SkeletonEstimate)> {
    Ok((
        skeleton_single_child_prob(law, runs, depth, &seed.derive("depth", depth as u64))?,
        skeleton_single_child_prob(law, runs, 2 * depth, &seed.derive("depth", 2 * depth as u64))?,
    ))
}
