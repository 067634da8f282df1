use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::SweepConfig;
use super::harness::{SizeContext, TrialRecord};
use crate::degree::core_theory;
use crate::error::Result;
use crate::stats::{summarize, Summary};

pub const CSV_HEADER: &str =
    "law,n,trial,seed,mode,diam_w,flood_w,diam_norm,flood_norm,core_ratio,q1_tilde_emp,t_alpha,t_beta,wall_ms";

pub const AGGREGATE_CSV_HEADER: &str = "law,n,statistic,count,mean,sd,se,limit";

impl TrialRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.law,
            self.n,
            self.trial,
            self.seed,
            self.mode,
            self.diam_w,
            self.flood_w,
            self.diam_norm,
            self.flood_norm,
            self.core_ratio,
            self.q1_tilde_emp,
            self.t_alpha,
            self.t_beta,
            self.wall_ms
        )
    }
}

/// One per-size statistic against its limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub name: String,
    pub summary: Summary,
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeAggregate {
    pub law: String,
    pub n: usize,
    pub trials: usize,
    pub failed: usize,
    pub statistics: Vec<Statistic>,
}

impl SizeAggregate {
    pub fn get(&self, name: &str) -> Option<&Statistic> {
        self.statistics.iter().find(|s| s.name == name)
    }
}

/// Per-size means and standard errors of the normalized distances, the
/// diameter-flood gap and the core statistics, with their limits.
pub fn aggregate(records: &[TrialRecord], contexts: &[SizeContext]) -> Result<Vec<SizeAggregate>> {
    let mut out = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.n == ctx.n).collect();
        let ok: Vec<&TrialRecord> = rows.iter().copied().filter(|r| r.is_ok()).collect();
        let c = &ctx.constants;
        let core = core_theory(&ctx.law, c)?;
        let stat = |name: &str, f: &dyn Fn(&TrialRecord) -> f64, limit: f64| Statistic {
            name: name.to_owned(),
            summary: summarize(&ok.iter().map(|r| f(r)).collect::<Vec<_>>()),
            limit,
        };
        let ln_n = (ctx.n as f64).ln();
        let statistics = vec![
            stat("diam_norm", &|r| r.diam_norm, c.diam_limit),
            stat("flood_norm", &|r| r.flood_norm, c.flood_limit),
            stat("flood_giant_norm", &|r| r.flood_giant_norm, c.flood_limit),
            stat("gap_norm", &|r| r.diam_norm - r.flood_norm, 1.0 / c.gamma_dmin),
            stat("core_ratio", &|r| r.core_ratio, core.h1_at_phat),
            stat("q1_tilde_emp", &|r| r.q1_tilde_emp, c.lambda_star),
            stat(
                "phase_gap_norm",
                &|r| (r.t_beta - r.t_alpha) / ln_n,
                1.0 / (2.0 * (c.nu - 1.0)),
            ),
        ];
        out.push(SizeAggregate {
            law: rows.first().map_or_else(String::new, |r| r.law.clone()),
            n: ctx.n,
            trials: rows.len(),
            failed: rows.len() - ok.len(),
            statistics,
        });
    }
    Ok(out)
}

pub fn write_csv<W: Write>(out: &mut W, records: &[TrialRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(out: &mut W, aggregates: &[SizeAggregate]) -> io::Result<()> {
    writeln!(out, "{AGGREGATE_CSV_HEADER}")?;
    for a in aggregates {
        for s in &a.statistics {
            let m = &s.summary;
            writeln!(out, "{},{},{},{},{},{},{},{}", a.law, a.n, s.name, m.count, m.mean, m.sd, m.se, s.limit)?;
        }
    }
    Ok(())
}

/// A `config` line, one `trial` line per record, then one `aggregate` line per size.
///
/// Non-finite numbers become `null`.
pub fn write_jsonl<W: Write>(
    out: &mut W,
    config: &SweepConfig,
    records: &[TrialRecord],
    aggregates: &[SizeAggregate],
) -> io::Result<()> {
    writeln!(out, "{}", json!({ "kind": "config", "config": config }))?;
    for r in records {
        writeln!(out, "{}", json!({ "kind": "trial", "config": config, "record": r }))?;
    }
    for a in aggregates {
        writeln!(out, "{}", json!({ "kind": "aggregate", "aggregate": a }))?;
    }
    Ok(())
}

/// Writes whichever of the three outputs `config.output` names.
pub fn write_outputs(config: &SweepConfig, records: &[TrialRecord], aggregates: &[SizeAggregate]) -> Result<()> {
    let create = |p: &std::path::Path| -> io::Result<io::BufWriter<std::fs::File>> {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        Ok(io::BufWriter::new(std::fs::File::create(p)?))
    };
    if let Some(p) = &config.output.csv {
        let mut f = create(p)?;
        write_csv(&mut f, records)?;
        f.flush()?;
    }
    if let Some(p) = &config.output.jsonl {
        let mut f = create(p)?;
        write_jsonl(&mut f, config, records, aggregates)?;
        f.flush()?;
    }
    if let Some(p) = &config.output.aggregates {
        let mut f = create(p)?;
        write_aggregate_csv(&mut f, aggregates)?;
        f.flush()?;
    }
    Ok(())
}

/// `true` when `|mean - limit|` is non-increasing along the grid, allowing
/// one inversion no larger than the later point's standard error.
pub fn approaches_limit(points: &[(f64, f64)], limit: f64) -> bool {
    let mut inversions = 0;
    for w in points.windows(2) {
        let (a, b) = ((w[0].0 - limit).abs(), (w[1].0 - limit).abs());
        if b > a {
            inversions += 1;
            if inversions > 1 || b - a > w[1].1 {
                return false;
            }
        }
    }
    true
}
