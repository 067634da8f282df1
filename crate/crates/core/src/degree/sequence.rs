use rand::Rng;
use serde::{Deserialize, Serialize};

use super::law::{DegreeLaw, SizeBiasedLaw};
use crate::error::{Error, Result};

/// Resampling cap for [`DegreeSequence::sample`].
pub const MAX_SEQUENCE_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    total: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationSide {
    /// Remove the `beta` largest degrees.
    Lower,
    /// Remove the `(beta + 1) * max_degree` smallest degrees.
    Upper,
}

impl DegreeSequence {
    /// Validates positivity and an even total degree.
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("empty degree sequence".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidArgument("degrees must be positive".into()));
        }
        let total: u64 = degrees.iter().map(|&d| d as u64).sum();
        if total % 2 != 0 {
            return Err(Error::InvalidArgument(format!("total degree {total} is odd")));
        }
        Ok(Self { degrees, total })
    }

    /// Draws `n` i.i.d. degrees from `law`, resampling until the total is even
    /// and the empirical minimum equals the law's `d_min`.
    pub fn sample<R: Rng + ?Sized>(law: &DegreeLaw, n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let cdf = law.cdf_table();
        let d_min = law.d_min();
        for _ in 0..MAX_SEQUENCE_ATTEMPTS {
            let degrees: Vec<u32> = (0..n).map(|_| sample_index(&cdf, rng) as u32).collect();
            let total: u64 = degrees.iter().map(|&d| d as u64).sum();
            let min = degrees.iter().copied().min().unwrap_or(0);
            if total % 2 == 0 && min == d_min {
                return Ok(Self { degrees, total });
            }
        }
        Err(Error::InvalidArgument(format!(
            "no even-total sequence with minimum degree {d_min} for n = {n} after {MAX_SEQUENCE_ATTEMPTS} draws"
        )))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.total
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    /// `u_k = |{i : d_i = k}|`, indexed by `k`.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_degree() as usize + 1];
        for &d in &self.degrees {
            counts[d as usize] += 1;
        }
        counts
    }

    /// `sum d_i^(2+eps) / n`; a per-n diagnostic for the moment bound.
    pub fn moment_ratio(&self, eps: f64) -> f64 {
        let s: f64 = self.degrees.iter().map(|&d| (d as f64).powf(2.0 + eps)).sum();
        s / self.n() as f64
    }

    /// Size-biased empirical law of the whole sequence.
    pub fn size_biased(&self) -> SizeBiasedLaw {
        size_biased_of_sorted(&self.sorted())
            .expect("a validated sequence has positive total degree")
    }

    fn sorted(&self) -> Vec<u32> {
        let mut s = self.degrees.clone();
        s.sort_unstable();
        s
    }
}

/// Truncated size-biased empirical laws bracketing forward degrees during the
/// first `beta` exploration steps.
pub fn truncated_size_biased(
    seq: &DegreeSequence,
    beta: usize,
    side: TruncationSide,
) -> Result<SizeBiasedLaw> {
    let n = seq.n();
    let sorted = seq.sorted();
    let kept = match side {
        TruncationSide::Lower => {
            if beta >= n {
                return Err(Error::InvalidArgument(format!(
                    "removing {beta} largest degrees leaves nothing of {n}"
                )));
            }
            &sorted[..n - beta]
        }
        TruncationSide::Upper => {
            let removed = (beta as u64 + 1) * seq.max_degree() as u64;
            if removed >= n as u64 {
                return Err(Error::InvalidArgument(format!(
                    "removing {removed} smallest degrees leaves nothing of {n}"
                )));
            }
            &sorted[removed as usize..]
        }
    };
    size_biased_of_sorted(kept)
}

fn size_biased_of_sorted(degrees: &[u32]) -> Result<SizeBiasedLaw> {
    let max = degrees.last().copied().unwrap_or(0) as usize;
    let total: f64 = degrees.iter().map(|&d| d as f64).sum();
    if total == 0.0 {
        return Err(Error::InvalidArgument("no half-edges remain".into()));
    }
    let mut masses = vec![0.0; max.max(1)];
    for &d in degrees {
        masses[d as usize - 1] += d as f64;
    }
    for m in &mut masses {
        *m /= total;
    }
    SizeBiasedLaw::from_masses(masses)
}

/// Inverse-CDF draw of an index from a cumulative table.
pub(crate) fn sample_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Total-variation distance between two mass vectors indexed from 0.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    0.5 * (0..len)
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}
