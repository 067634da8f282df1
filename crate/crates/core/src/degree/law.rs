use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance within which explicit probabilities are renormalized instead of
/// rejected.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// Tail mass below which a Poisson profile is considered fully captured.
pub const POISSON_TAIL_TOL: f64 = 1e-12;

/// Moment exponent slack used for power-law cutoffs, `cutoff = n^(1/(2+eps))`.
pub const POWERLAW_EPS: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Explicit,
    Regular(u32),
    TruncatedPoisson { mu0: f64, cutoff: u32 },
    PowerLaw { tau: f64, cutoff: u32 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Explicit => write!(f, "explicit"),
            Family::Regular(d) => write!(f, "regular {d}"),
            Family::TruncatedPoisson { mu0, cutoff } => write!(f, "poisson {mu0} {cutoff}"),
            Family::PowerLaw { tau, cutoff } => write!(f, "powerlaw {tau} {cutoff}"),
        }
    }
}

/// Probability mass function over positive degrees with a finite support.
///
/// Masses are stored densely by degree; index 0 is always zero because
/// isolated vertices are excluded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeLaw {
    masses: Vec<f64>,
    family: Family,
}

impl DegreeLaw {
    /// Builds a law from `(degree, probability)` pairs.
    ///
    /// Zero-probability entries are dropped. If the probabilities sum to
    /// within [`RENORMALIZE_TOL`] of one they are rescaled to sum to one,
    /// otherwise the law is rejected.
    pub fn explicit(pairs: &[(u32, f64)]) -> Result<Self> {
        Self::from_pairs(pairs, Family::Explicit)
    }

    fn from_pairs(pairs: &[(u32, f64)], family: Family) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidLaw("empty support".into()));
        }
        let max_k = pairs.iter().map(|&(k, _)| k).max().unwrap_or(0) as usize;
        let mut masses = vec![0.0; max_k + 1];
        let mut seen = vec![false; max_k + 1];
        for &(k, p) in pairs {
            if k == 0 {
                return Err(Error::InvalidLaw("degree 0 is not allowed".into()));
            }
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidLaw(format!(
                    "probability {p} for degree {k} is outside [0, 1]"
                )));
            }
            if seen[k as usize] {
                return Err(Error::InvalidLaw(format!("degree {k} listed twice")));
            }
            seen[k as usize] = true;
            masses[k as usize] = p;
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidLaw(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        for m in &mut masses {
            *m /= total;
        }
        while masses.len() > 1 && masses[masses.len() - 1] == 0.0 {
            masses.pop();
        }
        if masses.iter().all(|&p| p == 0.0) {
            return Err(Error::InvalidLaw("no positive mass".into()));
        }
        Ok(Self { masses, family })
    }

    pub fn regular(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidLaw("regular degree must be positive".into()));
        }
        Self::from_pairs(&[(d, 1.0)], Family::Regular(d))
    }

    /// Poisson(`mu0`) profile conditioned on degree at least one, truncated at
    /// `cutoff`; the mass beyond the cutoff is folded into the last atom.
    pub fn truncated_poisson(mu0: f64, cutoff: u32) -> Result<Self> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(Error::InvalidLaw(format!("poisson mean {mu0} must be positive")));
        }
        if cutoff == 0 {
            return Err(Error::InvalidLaw("poisson cutoff must be positive".into()));
        }
        // Unnormalized terms mu0^k / k!, computed in log space.
        let log_term = |k: u32| k as f64 * mu0.ln() - ln_factorial(k);
        let mut weights: Vec<f64> = (1..=cutoff).map(|k| log_term(k).exp()).collect();
        let mut tail = 0.0;
        let mut k = cutoff + 1;
        loop {
            let t = log_term(k).exp();
            tail += t;
            if (t < 1e-300 || t <= tail * 1e-17) && k as f64 > mu0 {
                break;
            }
            k += 1;
        }
        *weights.last_mut().expect("cutoff >= 1") += tail;
        let total: f64 = weights.iter().sum();
        let pairs: Vec<(u32, f64)> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as u32 + 1, w / total))
            .collect();
        Self::from_pairs(&pairs, Family::TruncatedPoisson { mu0, cutoff })
    }

    /// Smallest cutoff whose folded Poisson tail is at most [`POISSON_TAIL_TOL`]
    /// of the total mass.
    pub fn poisson_auto_cutoff(mu0: f64) -> u32 {
        let log_term = |k: u32| k as f64 * mu0.ln() - ln_factorial(k);
        let total = mu0.exp_m1();
        let mut k = mu0.ceil().max(1.0) as u32;
        loop {
            let mut tail = 0.0;
            let mut j = k + 1;
            loop {
                let t = log_term(j).exp();
                tail += t;
                if t <= tail * 1e-17 || t < 1e-300 {
                    break;
                }
                j += 1;
            }
            if tail <= POISSON_TAIL_TOL * total {
                return k;
            }
            k += 1;
        }
    }

    /// Power law `p_k ∝ k^-tau` on `1..=cutoff`.
    pub fn powerlaw(tau: f64, cutoff: u32) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidLaw(format!("power-law exponent {tau} must be positive")));
        }
        if cutoff == 0 {
            return Err(Error::InvalidLaw("power-law cutoff must be positive".into()));
        }
        let weights: Vec<f64> = (1..=cutoff).map(|k| (k as f64).powf(-tau)).collect();
        let total: f64 = weights.iter().sum();
        let pairs: Vec<(u32, f64)> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as u32 + 1, w / total))
            .collect();
        Self::from_pairs(&pairs, Family::PowerLaw { tau, cutoff })
    }

    /// Cutoff `floor(n^(1/(2+eps)))` keeping the `2+eps` moment ratio bounded.
    pub fn powerlaw_cutoff_for(n: usize) -> u32 {
        ((n as f64).powf(1.0 / (2.0 + POWERLAW_EPS)).floor() as u32).max(1)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Dense masses indexed by degree.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn p(&self, k: usize) -> f64 {
        self.masses.get(k).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| (k as u32, p))
    }

    pub fn max_degree(&self) -> u32 {
        (self.masses.len() - 1) as u32
    }

    pub fn d_min(&self) -> u32 {
        self.support().next().map(|(k, _)| k).expect("law has positive mass")
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().enumerate().map(|(k, &p)| k as f64 * p).sum()
    }

    /// `E[D(D-1)]`.
    pub fn factorial_moment2(&self) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(k, &p)| k as f64 * (k as f64 - 1.0) * p)
            .sum()
    }

    pub fn pgf(&self, z: f64) -> f64 {
        horner(&self.masses, z)
    }

    pub fn cdf_table(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.masses
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// Offspring pmf over non-negative integers; the size-biased law of a
/// [`DegreeLaw`] or an explicitly given offspring distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBiasedLaw {
    masses: Vec<f64>,
}

impl SizeBiasedLaw {
    /// `q_k = (k+1) p_{k+1} / mu`.
    pub fn from_degree_law(law: &DegreeLaw) -> Result<Self> {
        let mu = law.mean();
        if !(mu > 0.0) {
            return Err(Error::InvalidLaw("mean degree must be positive".into()));
        }
        let p = law.masses();
        let masses: Vec<f64> = (0..p.len() - 1)
            .map(|k| (k as f64 + 1.0) * p[k + 1] / mu)
            .collect();
        Ok(Self { masses })
    }

    /// Explicit offspring masses indexed from 0, renormalized when within
    /// [`RENORMALIZE_TOL`] of summing to one.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidLaw("empty offspring law".into()));
        }
        if masses.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidLaw("offspring masses must be non-negative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidLaw(format!("offspring masses sum to {total}, not 1")));
        }
        let mut masses: Vec<f64> = masses.into_iter().map(|p| p / total).collect();
        while masses.len() > 1 && masses[masses.len() - 1] == 0.0 {
            masses.pop();
        }
        Ok(Self { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn q(&self, k: usize) -> f64 {
        self.masses.get(k).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| (k as u32, p))
    }

    /// Smallest offspring count with positive mass.
    pub fn min_offspring(&self) -> u32 {
        self.support().next().map(|(k, _)| k).unwrap_or(0)
    }

    /// `nu = sum k q_k`.
    pub fn mean(&self) -> f64 {
        self.masses.iter().enumerate().map(|(k, &q)| k as f64 * q).sum()
    }

    pub fn pgf(&self, z: f64) -> f64 {
        horner(&self.masses, z)
    }

    /// `phi_q'(z)` by differentiating the generating polynomial.
    pub fn pgf_derivative(&self, z: f64) -> f64 {
        let deriv: Vec<f64> = self
            .masses
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &q)| k as f64 * q)
            .collect();
        horner(&deriv, z)
    }
}

fn horner(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

pub(crate) fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_renormalizes_small_error() {
        let law = DegreeLaw::explicit(&[(1, 0.5 + 4e-10), (3, 0.5)]).unwrap();
        let total: f64 = law.masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_rejects_bad_sum_and_zero_degree() {
        assert!(DegreeLaw::explicit(&[(1, 0.5), (3, 0.4)]).is_err());
        assert!(DegreeLaw::explicit(&[(0, 0.5), (3, 0.5)]).is_err());
        assert!(DegreeLaw::explicit(&[(2, 0.5), (2, 0.5)]).is_err());
    }

    #[test]
    fn size_biased_single_atom() {
        let q = SizeBiasedLaw::from_degree_law(&DegreeLaw::regular(3).unwrap()).unwrap();
        assert_eq!(q.masses(), &[0.0, 0.0, 1.0]);
        assert_eq!(q.mean(), 2.0);
    }

    #[test]
    fn size_biased_two_atoms() {
        let law = DegreeLaw::explicit(&[(1, 0.5), (3, 0.5)]).unwrap();
        assert_eq!(law.mean(), 2.0);
        let q = SizeBiasedLaw::from_degree_law(&law).unwrap();
        assert_eq!(q.masses(), &[0.25, 0.0, 0.75]);
        assert_eq!(q.mean(), 1.5);
    }

    #[test]
    fn poisson_profile_size_biases_to_poisson() {
        let mu0: f64 = 2.0;
        let law = DegreeLaw::truncated_poisson(mu0, 50).unwrap();
        let q = SizeBiasedLaw::from_degree_law(&law).unwrap();
        for k in 0..30u32 {
            let poisson = (-mu0).exp() * mu0.powi(k as i32) / ln_factorial(k).exp();
            assert!((q.q(k as usize) - poisson).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn poisson_tail_is_folded() {
        let law = DegreeLaw::truncated_poisson(2.0, 3).unwrap();
        // P(D >= 3 | D >= 1) lands on the last atom.
        let norm = 1.0 - (-2.0f64).exp();
        let p1 = 2.0 * (-2.0f64).exp() / norm;
        let p2 = 2.0 * (-2.0f64).exp() / norm;
        assert!((law.p(1) - p1).abs() < 1e-12);
        assert!((law.p(2) - p2).abs() < 1e-12);
        assert!((law.p(3) - (1.0 - p1 - p2)).abs() < 1e-12);
    }

    #[test]
    fn poisson_auto_cutoff_captures_tail() {
        let k = DegreeLaw::poisson_auto_cutoff(2.0);
        assert!(k > 10 && k < 25, "{k}");
    }

    #[test]
    fn powerlaw_cutoff_keeps_moment_ratio() {
        assert_eq!(DegreeLaw::powerlaw_cutoff_for(1_000_000), 719);
        let law = DegreeLaw::powerlaw(2.5, 10).unwrap();
        assert_eq!(law.d_min(), 1);
        assert_eq!(law.max_degree(), 10);
    }

    #[test]
    fn nu_two_ways() {
        let laws = [
            DegreeLaw::regular(4).unwrap(),
            DegreeLaw::explicit(&[(1, 0.5), (3, 0.5)]).unwrap(),
            DegreeLaw::explicit(&[(2, 0.5), (4, 0.5)]).unwrap(),
            DegreeLaw::truncated_poisson(2.0, 40).unwrap(),
            DegreeLaw::powerlaw(2.7, 100).unwrap(),
        ];
        for law in &laws {
            let q = SizeBiasedLaw::from_degree_law(law).unwrap();
            let total: f64 = q.masses().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!((q.mean() - q.pgf_derivative(1.0)).abs() < 1e-10);
            assert!((q.mean() - law.factorial_moment2() / law.mean()).abs() < 1e-10);
        }
    }
}
