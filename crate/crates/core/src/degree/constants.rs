use serde::{Deserialize, Serialize};

use super::law::{DegreeLaw, SizeBiasedLaw};
use crate::error::{Error, Result};

pub const LAMBDA_TOL: f64 = 1e-12;
pub const MAX_FIXED_POINT_ITERS: usize = 1_000_000;

/// Analytic constants of a degree law and the limits of `diam_w / ln n` and
/// `flood_w / ln n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    pub mu: f64,
    pub nu: f64,
    /// Extinction probability of the size-biased branching process.
    pub lambda: f64,
    /// `phi_q'(lambda)`, the surviving skeleton's single-child probability.
    pub lambda_star: f64,
    pub q1: f64,
    pub d_min: u32,
    pub gamma_dmin: f64,
    /// `NaN` when `nu <= 1`.
    pub diam_limit: f64,
    /// `NaN` when `nu <= 1`.
    pub flood_limit: f64,
}

impl TheoryConstants {
    /// `(name, value)` pairs in output order.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("mu", self.mu),
            ("nu", self.nu),
            ("lambda", self.lambda),
            ("lambda_star", self.lambda_star),
            ("q1", self.q1),
            ("d_min", self.d_min as f64),
            ("gamma", self.gamma_dmin),
            ("diam_limit", self.diam_limit),
            ("flood_limit", self.flood_limit),
        ]
    }

    /// `name=value` lines.
    pub fn to_key_value(&self) -> String {
        self.fields().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn is_supercritical(&self) -> bool {
        self.nu > 1.0
    }
}

/// Smallest fixed point of `phi_q` in `[0, 1]`.
///
/// Iterates `lambda <- phi_q(lambda)` from zero, which increases
/// monotonically to the smallest root, then polishes with Newton steps.
/// Returns 1 outright when `nu <= 1`.
pub fn solve_lambda(q: &SizeBiasedLaw, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let nu = q.mean();
    if !nu.is_finite() {
        return Err(Error::InvalidLaw("offspring mean is not finite".into()));
    }
    if nu <= 1.0 {
        return Ok(1.0);
    }
    let mut lambda = 0.0;
    let mut iterations = 0;
    loop {
        let next = q.pgf(lambda);
        iterations += 1;
        if (next - lambda).abs() <= tol {
            lambda = next;
            break;
        }
        lambda = next;
        if iterations >= MAX_FIXED_POINT_ITERS {
            return Err(Error::NoConvergence { last: lambda, iterations });
        }
    }
    // phi_q'(lambda) < 1 at the smallest root of a supercritical law.
    for _ in 0..8 {
        let slope = q.pgf_derivative(lambda) - 1.0;
        if slope >= 0.0 {
            break;
        }
        let step = (q.pgf(lambda) - lambda) / slope;
        let polished = (lambda - step).clamp(0.0, 1.0);
        if (polished - lambda).abs() <= f64::EPSILON {
            lambda = polished;
            break;
        }
        lambda = polished;
    }
    if (q.pgf(lambda) - lambda).abs() > tol {
        return Err(Error::NoConvergence { last: lambda, iterations });
    }
    Ok(lambda)
}

/// Minimum-degree rate: `d` for `d >= 3`, `2(1-q1)` for `d = 2`, `1-lambda*`
/// for `d = 1`.
pub fn gamma_of(d: u32, q1: f64, lambda_star: f64) -> Result<f64> {
    match d {
        0 => Err(Error::InvalidArgument("degree 0 has no rate".into())),
        1 => Ok(1.0 - lambda_star),
        2 => Ok(2.0 * (1.0 - q1)),
        d => Ok(d as f64),
    }
}

/// All constants of `law`. For `nu <= 1` the error carries the constants
/// with `NaN` limits.
pub fn theory_constants(law: &DegreeLaw) -> Result<TheoryConstants> {
    let q = SizeBiasedLaw::from_degree_law(law)?;
    let nu = q.mean();
    let lambda = solve_lambda(&q, LAMBDA_TOL)?;
    let lambda_star = q.pgf_derivative(lambda);
    let q1 = q.q(1);
    let d_min = law.d_min();
    let gamma_dmin = gamma_of(d_min, q1, lambda_star)?;
    let mut constants = TheoryConstants {
        mu: law.mean(),
        nu,
        lambda,
        lambda_star,
        q1,
        d_min,
        gamma_dmin,
        diam_limit: f64::NAN,
        flood_limit: f64::NAN,
    };
    if nu <= 1.0 {
        return Err(Error::Subcritical { nu, constants: Box::new(constants) });
    }
    // Single division keeps rational limits correctly rounded.
    let excess = nu - 1.0;
    let denom = excess * gamma_dmin;
    constants.diam_limit = (gamma_dmin + 2.0 * excess) / denom;
    constants.flood_limit = (gamma_dmin + excess) / denom;
    Ok(constants)
}

/// Phase boundaries `alpha_n = ln^3 n` and
/// `beta_n = 3 sqrt(mu/(nu-1) n ln n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseBounds {
    pub alpha: f64,
    pub beta: f64,
}

impl PhaseBounds {
    pub fn new(constants: &TheoryConstants, n: usize) -> Self {
        let ln_n = (n as f64).ln();
        Self {
            alpha: ln_n.powi(3),
            beta: 3.0 * (constants.mu / (constants.nu - 1.0) * n as f64 * ln_n).sqrt(),
        }
    }

    /// Integer step index for `alpha_n`.
    pub fn alpha_step(&self) -> usize {
        self.alpha.ceil() as usize
    }

    /// Integer step index for `beta_n`.
    pub fn beta_step(&self) -> usize {
        self.beta.ceil() as usize
    }
}
