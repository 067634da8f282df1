use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::{solve_lambda, SizeBiasedLaw, LAMBDA_TOL};
use crate::error::{Error, Result};
use crate::graph::{exp1, Seed};

/// Runs per independently seeded block of a Monte Carlo batch.
pub const BLOCK_RUNS: u64 = 1 << 14;

/// Offspring distribution with a cumulative table for inverse-CDF draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffspringLaw {
    law: SizeBiasedLaw,
    cdf: Vec<f64>,
    last: u32,
}

impl OffspringLaw {
    pub fn new(law: SizeBiasedLaw) -> Result<Self> {
        if !law.mean().is_finite() {
            return Err(Error::InvalidLaw("offspring mean is not finite".into()));
        }
        let mut acc = 0.0;
        let cdf = law
            .masses()
            .iter()
            .map(|&q| {
                acc += q;
                acc
            })
            .collect();
        let last = law.support().last().map_or(0, |(k, _)| k);
        Ok(Self { law, cdf, last })
    }

    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        Self::new(SizeBiasedLaw::from_masses(masses)?)
    }

    pub fn law(&self) -> &SizeBiasedLaw {
        &self.law
    }

    pub fn masses(&self) -> &[f64] {
        self.law.masses()
    }

    /// `f'(1)`.
    pub fn mean(&self) -> f64 {
        self.law.mean()
    }

    pub fn xi_min(&self) -> u32 {
        self.law.min_offspring()
    }

    pub fn is_supercritical(&self) -> bool {
        self.mean() > 1.0
    }

    /// Smallest fixed point of the generating function.
    pub fn extinction_probability(&self) -> Result<f64> {
        solve_lambda(&self.law, LAMBDA_TOL)
    }

    /// Generating-function slope at the extinction probability.
    pub fn lambda_star(&self) -> Result<f64> {
        Ok(self.law.pgf_derivative(self.extinction_probability()?))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u) as u32;
        i.min(self.last)
    }
}

/// One realization of the split-time chain from `k` particles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BpTrace {
    pub k: u32,
    /// Offspring counts `xi_1, xi_2, ...`.
    pub offspring: Vec<u32>,
    /// `S_0, S_1, ...` with `S_0 = k`.
    pub s: Vec<u64>,
    /// `tau_1, tau_2, ...`.
    pub tau: Vec<f64>,
    /// `T_0 = 0, T_1, ...`.
    pub t: Vec<f64>,
    pub extinct: bool,
    /// The step budget ran out before absorption.
    pub truncated: bool,
}

impl BpTrace {
    pub fn steps(&self) -> usize {
        self.tau.len()
    }

    /// Absorption index `I`; `None` when not absorbed within the budget.
    pub fn absorption_index(&self) -> Option<usize> {
        self.extinct.then(|| self.steps())
    }

    /// `T_n`, infinite past absorption and `None` past the budget.
    pub fn t_at(&self, n: usize) -> Option<f64> {
        match self.t.get(n) {
            Some(&t) => Some(t),
            None if self.extinct => Some(f64::INFINITY),
            None => None,
        }
    }

    /// `tau_j S_{j-1}`, i.i.d. `Exp(1)` under the construction.
    pub fn normalized_waits(&self) -> impl Iterator<Item = f64> + '_ {
        self.tau.iter().zip(&self.s).map(|(&tau, &s)| tau * s as f64)
    }
}

/// Simulates at most `budget` jumps of the chain started from `k` particles.
pub fn simulate_bp<R: Rng + ?Sized>(law: &OffspringLaw, k: u32, budget: usize, rng: &mut R) -> Result<BpTrace> {
    if k == 0 {
        return Err(Error::InvalidArgument("initial population must be at least 1".into()));
    }
    let mut trace = BpTrace {
        k,
        offspring: Vec::new(),
        s: vec![k as u64],
        tau: Vec::new(),
        t: vec![0.0],
        extinct: false,
        truncated: false,
    };
    let mut s = k as u64;
    let mut t = 0.0;
    while trace.steps() < budget {
        let tau = exp1(rng) / s as f64;
        let xi = law.sample(rng);
        t += tau;
        s = s + xi as u64 - 1;
        trace.offspring.push(xi);
        trace.tau.push(tau);
        trace.t.push(t);
        trace.s.push(s);
        if s == 0 {
            trace.extinct = true;
            return Ok(trace);
        }
    }
    trace.truncated = true;
    Ok(trace)
}

/// `T_n` of a fresh chain from `k` particles without storing the path;
/// infinite when absorbed before step `n`.
pub fn split_time<R: Rng + ?Sized>(law: &OffspringLaw, k: u32, n: usize, rng: &mut R) -> f64 {
    let mut s = k as u64;
    let mut t = 0.0;
    for _ in 0..n {
        if s == 0 {
            return f64::INFINITY;
        }
        t += exp1(rng) / s as f64;
        s = s + law.sample(rng) as u64 - 1;
    }
    t
}

/// Population at which a line counts as surviving: extinction from there
/// has probability below `1e-12`.
pub fn survival_cap(lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 1;
    }
    let need = (1e-12f64.ln() / lambda.ln()).ceil();
    if need.is_finite() {
        (need as u64).max(256)
    } else {
        u64::MAX
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtinctionEstimate {
    pub runs: u64,
    pub extinct: u64,
    /// Runs that neither died nor reached the cap within the step budget.
    pub undecided: u64,
    pub frequency: f64,
    pub standard_error: f64,
}

/// Fraction of chains from `k` particles absorbed before reaching the
/// population cap of [`survival_cap`].
pub fn extinction_frequency(
    law: &OffspringLaw,
    k: u32,
    runs: u64,
    budget: usize,
    seed: &Seed,
) -> Result<ExtinctionEstimate> {
    if k == 0 || runs == 0 {
        return Err(Error::InvalidArgument("need k >= 1 and runs >= 1".into()));
    }
    let cap = survival_cap(law.extinction_probability()?);
    let (extinct, undecided) = blocks(runs, seed, |rng, count| {
        let mut dead = 0u64;
        let mut open = 0u64;
        for _ in 0..count {
            let mut s = k as u64;
            let mut steps = 0;
            while s > 0 && s < cap && steps < budget {
                s = s + law.sample(rng) as u64 - 1;
                steps += 1;
            }
            dead += (s == 0) as u64;
            open += (s > 0 && s < cap) as u64;
        }
        (dead, open)
    })
    .into_iter()
    .fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
    let frequency = extinct as f64 / runs as f64;
    Ok(ExtinctionEstimate {
        runs,
        extinct,
        undecided,
        frequency,
        standard_error: (frequency * (1.0 - frequency) / runs as f64).sqrt(),
    })
}

/// Splits `runs` into blocks of [`BLOCK_RUNS`], each with its own derived
/// stream, and evaluates them in parallel; results are in block order.
pub(crate) fn blocks<A: Send>(
    runs: u64,
    seed: &Seed,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng, u64) -> A + Sync,
) -> Vec<A> {
    let count = runs.div_ceil(BLOCK_RUNS);
    (0..count)
        .into_par_iter()
        .map(|b| {
            let size = BLOCK_RUNS.min(runs - b * BLOCK_RUNS);
            f(&mut seed.derive("block", b).rng(), size)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_cdf_skips_zero_mass() {
        let law = OffspringLaw::from_masses(vec![0.0, 0.5, 0.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = [0usize; 4];
        for _ in 0..10_000 {
            seen[law.sample(&mut rng) as usize] += 1;
        }
        assert_eq!(seen[0] + seen[2], 0);
        assert!((seen[1] as f64 / 1e4 - 0.5).abs() < 0.03);
    }

    #[test]
    fn pure_death_absorbs_at_one() {
        let law = OffspringLaw::from_masses(vec![1.0]).unwrap();
        let tr = simulate_bp(&law, 1, 10, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(tr.absorption_index(), Some(1));
        assert_eq!(tr.s, vec![1, 0]);
        assert!(tr.t[1] > 0.0);
        assert_eq!(tr.t_at(5), Some(f64::INFINITY));
    }

    #[test]
    fn population_is_offspring_sum() {
        let law = OffspringLaw::from_masses(vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        let tr = simulate_bp(&law, 3, 500, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let mut s = 3i64;
        for (j, &xi) in tr.offspring.iter().enumerate() {
            s += xi as i64 - 1;
            assert_eq!(tr.s[j + 1] as i64, s);
            assert!((tr.t[j + 1] - tr.t[j] - tr.tau[j]).abs() < 1e-12 * tr.t[j + 1].max(1.0));
        }
    }

    #[test]
    fn budget_truncates() {
        let law = OffspringLaw::from_masses(vec![0.0, 0.0, 1.0]).unwrap();
        let tr = simulate_bp(&law, 1, 7, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(tr.truncated);
        assert_eq!(tr.s.last(), Some(&8));
        assert_eq!(tr.t_at(8), None);
        assert!(simulate_bp(&law, 0, 7, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn split_time_matches_trace() {
        let law = OffspringLaw::from_masses(vec![0.25, 0.0, 0.75]).unwrap();
        for s in 0..50 {
            let tr = simulate_bp(&law, 2, 40, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            let t = split_time(&law, 2, 40, &mut ChaCha8Rng::seed_from_u64(s));
            let want = tr.t_at(40).unwrap();
            assert!(t == want || (t - want).abs() < 1e-12, "{t} vs {want}");
        }
    }

    #[test]
    fn blocks_are_thread_independent() {
        let seed = Seed::new(4);
        let f = |rng: &mut ChaCha8Rng, n: u64| (0..n).map(|_| rng.random::<u32>() as u64).sum::<u64>();
        let a = blocks(40_000, &seed, f);
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| blocks(40_000, &seed, f));
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn extinction_certain_for_pure_death() {
        let law = OffspringLaw::from_masses(vec![1.0]).unwrap();
        let est = extinction_frequency(&law, 1, 100, 1000, &Seed::new(1)).unwrap();
        assert_eq!(est.extinct, 100);
    }
}
