use std::fmt;

use serde::{Deserialize, Serialize};

use super::trace::ExplorationTrace;
use crate::degree::{PhaseBounds, TheoryConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Holds,
    Fails,
    /// The trace stops before the event's range without a violation.
    Indeterminate,
}

impl Flag {
    pub fn holds(self) -> bool {
        self == Flag::Holds
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Holds => "holds",
            Flag::Fails => "fails",
            Flag::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvents {
    /// `S(k) >= d_min + gamma(k)` for `0 <= k < alpha`.
    pub r: Flag,
    /// `S(k) >= gamma(k)` for `0 <= k < alpha`.
    pub r_prime: Flag,
    /// `S(k) >= (nu - 1) k / (1 + eps)` for `alpha <= k <= beta`.
    pub r_double_prime: Flag,
    pub alpha_step: usize,
    pub beta_step: usize,
    /// `beta` was clamped to `n - 1`.
    pub beta_clamped: bool,
}

/// Evaluates the three ball-growth events, taking `alpha = ceil(ln^3 n)` and
/// `beta = ceil(3 sqrt(mu/(nu-1) n ln n))`.
pub fn trace_events(trace: &ExplorationTrace, constants: &TheoryConstants, n: usize, eps: f64) -> TraceEvents {
    let bounds = PhaseBounds::new(constants, n);
    let alpha = bounds.alpha_step();
    let (beta, beta_clamped) = clamp_beta(bounds.beta_step(), n);
    let d_min = constants.d_min as i64;
    let slope = (constants.nu - 1.0) / (1.0 + eps);
    TraceEvents {
        r: check(trace, 0, alpha.saturating_sub(1), |_, s, g| s >= d_min + g as i64),
        r_prime: check(trace, 0, alpha.saturating_sub(1), |_, s, g| s >= g as i64),
        r_double_prime: check(trace, alpha, beta, |k, s, _| s as f64 >= slope * k as f64),
        alpha_step: alpha,
        beta_step: beta,
        beta_clamped,
    }
}

pub(crate) fn clamp_beta(beta: usize, n: usize) -> (usize, bool) {
    let cap = n.saturating_sub(1);
    if beta > cap {
        (cap, true)
    } else {
        (beta, false)
    }
}

fn check(trace: &ExplorationTrace, from: usize, to: usize, ok: impl Fn(usize, i64, u32) -> bool) -> Flag {
    if from > to {
        return Flag::Holds;
    }
    for k in from..=to {
        match (trace.s_at(k), trace.gamma_at(k)) {
            (Some(s), Some(g)) => {
                if !ok(k, s, g) {
                    return Flag::Fails;
                }
            }
            _ => return Flag::Indeterminate,
        }
    }
    Flag::Holds
}
