//! Thinned degree laws and the limiting 2-core of a configuration model.

use serde::{Deserialize, Serialize};

use super::constants::TheoryConstants;
use super::law::{ln_factorial, DegreeLaw, SizeBiasedLaw};
use crate::error::{Error, Result};

/// Step of the downward scan that brackets the largest root.
pub const CORE_SCAN_STEP: f64 = 1e-3;
pub const CORE_BISECT_TOL: f64 = 1e-12;
/// `|mu p^2 - h(p)|` below which `p` counts as a root.
pub const CORE_ROOT_TOL: f64 = 1e-10;

/// Law of `D_p`: keep each of `D ~ law` points independently with
/// probability `prob`. Indexed by `r = 0..=max_degree`.
pub fn thinned_law(law: &DegreeLaw, prob: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidArgument(format!("thinning probability {prob} outside [0, 1]")));
    }
    let max = law.max_degree() as usize;
    let mut out = vec![0.0; max + 1];
    for (l, p_l) in law.support() {
        for (r, slot) in out.iter_mut().enumerate().take(l as usize + 1) {
            *slot += p_l * binomial_pmf(l, r as u32, prob);
        }
    }
    Ok(out)
}

/// `P(Bin(l, p) = r)`.
pub fn binomial_pmf(l: u32, r: u32, p: f64) -> f64 {
    if r > l {
        return 0.0;
    }
    if p == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if r == l { 1.0 } else { 0.0 };
    }
    let ln_choose = ln_factorial(l) - ln_factorial(r) - ln_factorial(l - r);
    (ln_choose + r as f64 * p.ln() + (l - r) as f64 * (1.0 - p).ln()).exp()
}

/// `h(p) = E[D_p 1(D_p >= 2)]`.
pub fn h(law: &DegreeLaw, p: f64) -> f64 {
    thinned_law(law, p)
        .expect("p in [0, 1]")
        .iter()
        .enumerate()
        .skip(2)
        .map(|(r, &m)| r as f64 * m)
        .sum()
}

/// `h_1(p) = P(D_p >= 2)`.
pub fn h1(law: &DegreeLaw, p: f64) -> f64 {
    thinned_law(law, p).expect("p in [0, 1]").iter().skip(2).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreTheory {
    /// Largest `p <= 1` with `mu p^2 = h(p)`; 0 when the core is empty.
    pub p_hat: f64,
    /// Limiting fraction of vertices in the 2-core.
    pub h1_at_phat: f64,
    /// Limiting degree law of the core (degrees >= 2); `None` when empty.
    pub tilde_p: Option<DegreeLaw>,
    pub tilde_mu: f64,
    pub tilde_q1: f64,
    pub tilde_nu: f64,
    /// Limiting edges per vertex, `mu p_hat^2 / 2`.
    pub edge_ratio: f64,
    pub empty_core: bool,
}

/// Limiting 2-core statistics of the configuration model with law `law`.
pub fn core_theory(law: &DegreeLaw, constants: &TheoryConstants) -> Result<CoreTheory> {
    let mu = law.mean();
    let gap = |p: f64| h(law, p) - mu * p * p;
    let empty = CoreTheory {
        p_hat: 0.0,
        h1_at_phat: 0.0,
        tilde_p: None,
        tilde_mu: 0.0,
        tilde_q1: 0.0,
        tilde_nu: 0.0,
        edge_ratio: 0.0,
        empty_core: true,
    };
    if !constants.is_supercritical() {
        return Ok(empty);
    }
    let p_hat = largest_root(gap).unwrap_or(0.0);
    if p_hat <= 0.0 {
        return Ok(empty);
    }
    let thinned = thinned_law(law, p_hat)?;
    let h1_val: f64 = thinned.iter().skip(2).sum();
    let pairs: Vec<(u32, f64)> = thinned
        .iter()
        .enumerate()
        .skip(2)
        .filter(|(_, &m)| m > 0.0)
        .map(|(j, &m)| (j as u32, m / h1_val))
        .collect();
    let tilde_p = DegreeLaw::explicit(&pairs)?;
    let tilde_mu = tilde_p.mean();
    let tilde_q = SizeBiasedLaw::from_degree_law(&tilde_p)?;
    Ok(CoreTheory {
        p_hat,
        h1_at_phat: h1_val,
        tilde_mu,
        tilde_q1: tilde_q.q(1),
        tilde_nu: tilde_q.mean(),
        tilde_p: Some(tilde_p),
        edge_ratio: mu * p_hat * p_hat / 2.0,
        empty_core: false,
    })
}

/// Scans `p` down from 1 for the first point where `gap(p) >= 0` and bisects
/// the bracket. Returns `None` when no positive root exists.
fn largest_root(gap: impl Fn(f64) -> f64) -> Option<f64> {
    let g1 = gap(1.0);
    if g1.abs() <= CORE_ROOT_TOL || g1 > 0.0 {
        return Some(1.0);
    }
    let steps = (1.0 / CORE_SCAN_STEP).round() as usize;
    let mut hi = 1.0;
    for j in 1..steps {
        let p = 1.0 - j as f64 * CORE_SCAN_STEP;
        let g = gap(p);
        if g.abs() <= CORE_ROOT_TOL * 1e-2 {
            return Some(p);
        }
        if g > 0.0 {
            let mut lo = p;
            // gap(lo) > 0 > gap(hi)
            while hi - lo > CORE_BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if gap(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        hi = p;
    }
    None
}
