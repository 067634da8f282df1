use std::io::Write;

use serde::{Deserialize, Serialize};

use super::process::{blocks, split_time, OffspringLaw};
use crate::error::{Error, Result};
use crate::graph::Seed;

/// Each probe needs at least this many expected hits' worth of runs.
pub const PROBE_RUNS_FACTOR: f64 = 100.0;

pub const PROBE_CSV_HEADER: &str = "law_id,k,x,n,runs,hits,emp_exponent,theory_exponent";

/// Tail rate `g(xi_min, k)` of the split times started from `k` particles.
pub fn tail_rate(law: &OffspringLaw, k: u32) -> Result<f64> {
    Ok(match law.xi_min() {
        0 => 1.0 - law.lambda_star()?,
        1 => k as f64 * (1.0 - law.law().q(1)),
        _ => k as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailProbeRow {
    pub law_id: String,
    pub k: u32,
    pub x: f64,
    pub n: usize,
    pub runs: u64,
    pub hits: u64,
    /// `ln(hits / runs) / ln n`.
    pub emp_exponent: f64,
    /// `-x g`.
    pub theory_exponent: f64,
}

impl TailProbeRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.law_id, self.k, self.x, self.n, self.runs, self.hits, self.emp_exponent, self.theory_exponent
        )
    }
}

/// Runs needed for a probe at `(x, n)` to expect [`PROBE_RUNS_FACTOR`] hits.
pub fn required_runs(g: f64, x: f64, n: usize) -> u64 {
    (PROBE_RUNS_FACTOR * (n as f64).powf(x * g)).ceil() as u64
}

/// Frequency of `inf > T_n >= (x + 1/(f'(1) - 1)) ln n` over `runs` chains.
pub fn tail_probe(
    law: &OffspringLaw,
    law_id: &str,
    k: u32,
    x: f64,
    n: usize,
    runs: u64,
    seed: &Seed,
) -> Result<TailProbeRow> {
    if !law.is_supercritical() {
        return Err(Error::InvalidArgument(format!("offspring mean {} is not above 1", law.mean())));
    }
    if k == 0 || n < 2 || !(x >= 0.0) {
        return Err(Error::InvalidArgument("need k >= 1, n >= 2 and x >= 0".into()));
    }
    let g = tail_rate(law, k)?;
    let needed = required_runs(g, x, n);
    if runs < needed {
        return Err(Error::Infeasible {
            reason: format!("{runs} runs at x = {x}, n = {n}, g = {g}"),
            required_runs: needed,
        });
    }
    let ln_n = (n as f64).ln();
    let threshold = (x + 1.0 / (law.mean() - 1.0)) * ln_n;
    let hits: u64 = blocks(runs, seed, |rng, count| {
        (0..count)
            .filter(|_| {
                let t = split_time(law, k, n, rng);
                t.is_finite() && t >= threshold
            })
            .count() as u64
    })
    .into_iter()
    .sum();
    Ok(TailProbeRow {
        law_id: law_id.to_owned(),
        k,
        x,
        n,
        runs,
        hits,
        emp_exponent: (hits as f64 / runs as f64).ln() / ln_n,
        theory_exponent: -x * g,
    })
}

/// Probes every `(x, n)` pair, `x` outermost; each pair gets its own stream.
pub fn tail_exponent_probe(
    law: &OffspringLaw,
    law_id: &str,
    k: u32,
    xs: &[f64],
    ns: &[usize],
    runs: u64,
    seed: &Seed,
) -> Result<Vec<TailProbeRow>> {
    let mut rows = Vec::with_capacity(xs.len() * ns.len());
    for (i, &x) in xs.iter().enumerate() {
        for (j, &n) in ns.iter().enumerate() {
            let s = seed.derive("x", i as u64).derive("n", j as u64);
            rows.push(tail_probe(law, law_id, k, x, n, runs, &s)?);
        }
    }
    Ok(rows)
}

pub fn write_probe_csv<W: Write>(rows: &[TailProbeRow], mut out: W) -> Result<()> {
    writeln!(out, "{PROBE_CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}
