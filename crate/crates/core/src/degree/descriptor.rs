//! Text descriptors for degree laws.
//!
//! A descriptor is either a one-line family (`regular 3`, `poisson 2 50`,
//! `powerlaw 2.5 auto`) or a table of `k p_k` lines, optionally preceded by a
//! line reading `explicit`. A table may also be written inline as
//! `explicit 1:0.5 3:0.5`. Blank lines and `#` comments are ignored.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::law::{DegreeLaw, SizeBiasedLaw};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cutoff {
    Fixed(u32),
    /// Resolved against the graph size when the law is instantiated.
    Auto,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Fixed(k) => write!(f, "{k}"),
            Cutoff::Auto => write!(f, "auto"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LawDescriptor {
    Explicit(Vec<(u32, f64)>),
    Regular(u32),
    Poisson { mu0: f64, cutoff: Cutoff },
    PowerLaw { tau: f64, cutoff: Cutoff },
}

impl LawDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let Some((first_line, first)) = lines.first() else {
            return Err(Error::Parse { line: 1, message: "empty law descriptor".into() });
        };
        let family_line = |expected: usize| -> Result<()> {
            if first.len() != expected {
                return Err(Error::Parse {
                    line: *first_line,
                    message: format!("`{}` takes {} argument(s)", first[0], expected - 1),
                });
            }
            if let Some((line, _)) = lines.get(1) {
                return Err(Error::Parse {
                    line: *line,
                    message: "unexpected content after family descriptor".into(),
                });
            }
            Ok(())
        };
        match first[0] {
            "regular" => {
                family_line(2)?;
                Ok(LawDescriptor::Regular(parse_num(first[1], *first_line, "degree")?))
            }
            "poisson" => {
                if first.len() == 2 {
                    family_line(2)?;
                    return Ok(LawDescriptor::Poisson {
                        mu0: parse_num(first[1], *first_line, "mean")?,
                        cutoff: Cutoff::Auto,
                    });
                }
                family_line(3)?;
                Ok(LawDescriptor::Poisson {
                    mu0: parse_num(first[1], *first_line, "mean")?,
                    cutoff: parse_cutoff(first[2], *first_line)?,
                })
            }
            "powerlaw" => {
                family_line(3)?;
                Ok(LawDescriptor::PowerLaw {
                    tau: parse_num(first[1], *first_line, "exponent")?,
                    cutoff: parse_cutoff(first[2], *first_line)?,
                })
            }
            _ => {
                let body = if first[0] == "explicit" {
                    if first.len() != 1 {
                        return Err(Error::Parse {
                            line: *first_line,
                            message: "`explicit` stands alone on its line".into(),
                        });
                    }
                    &lines[1..]
                } else {
                    &lines[..]
                };
                let pairs = parse_table(body, false)?;
                Ok(LawDescriptor::Explicit(pairs.into_iter().map(|(k, p)| (k, p)).collect()))
            }
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Instantiates the law; `n` is required for `auto` power-law cutoffs.
    pub fn resolve(&self, n: Option<usize>) -> Result<DegreeLaw> {
        match self {
            LawDescriptor::Explicit(pairs) => DegreeLaw::explicit(pairs),
            LawDescriptor::Regular(d) => DegreeLaw::regular(*d),
            LawDescriptor::Poisson { mu0, cutoff } => {
                let k = match cutoff {
                    Cutoff::Fixed(k) => *k,
                    Cutoff::Auto => DegreeLaw::poisson_auto_cutoff(*mu0),
                };
                DegreeLaw::truncated_poisson(*mu0, k)
            }
            LawDescriptor::PowerLaw { tau, cutoff } => {
                let k = match cutoff {
                    Cutoff::Fixed(k) => *k,
                    Cutoff::Auto => {
                        let n = n.ok_or_else(|| {
                            Error::InvalidArgument(
                                "power law with `auto` cutoff needs a graph size".into(),
                            )
                        })?;
                        DegreeLaw::powerlaw_cutoff_for(n)
                    }
                };
                DegreeLaw::powerlaw(*tau, k)
            }
        }
    }

    pub fn needs_size(&self) -> bool {
        matches!(self, LawDescriptor::PowerLaw { cutoff: Cutoff::Auto, .. })
    }

    /// Mean of the Poisson profile, used for `G(n,p)`/`G(n,m)` densities.
    pub fn poisson_mean(&self) -> Option<f64> {
        match self {
            LawDescriptor::Poisson { mu0, .. } => Some(*mu0),
            _ => None,
        }
    }
}

impl FromStr for LawDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Compact single-token identifier, safe inside CSV fields.
impl fmt::Display for LawDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawDescriptor::Explicit(pairs) => {
                write!(f, "explicit{{")?;
                for (i, (k, p)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{k}:{p}")?;
                }
                write!(f, "}}")
            }
            LawDescriptor::Regular(d) => write!(f, "regular-{d}"),
            LawDescriptor::Poisson { mu0, cutoff } => write!(f, "poisson-{mu0}-{cutoff}"),
            LawDescriptor::PowerLaw { tau, cutoff } => write!(f, "powerlaw-{tau}-{cutoff}"),
        }
    }
}

/// Parses an offspring table (`k q_k` lines, `k >= 0`) for branching runs.
pub fn parse_offspring(text: &str) -> Result<SizeBiasedLaw> {
    let lines = tokenize(text);
    let body = match lines.first() {
        Some((_, t)) if t.len() == 1 && (t[0] == "explicit" || t[0] == "offspring") => &lines[1..],
        _ => &lines[..],
    };
    let pairs = parse_table(body, true)?;
    let max_k = pairs.iter().map(|&(k, _)| k).max().unwrap_or(0) as usize;
    let mut masses = vec![0.0; max_k + 1];
    for (k, p) in pairs {
        masses[k as usize] += p;
    }
    SizeBiasedLaw::from_masses(masses)
}

fn parse_table(body: &[(usize, Vec<&str>)], allow_zero: bool) -> Result<Vec<(u32, f64)>> {
    if body.is_empty() {
        return Err(Error::Parse { line: 1, message: "no `k p_k` entries".into() });
    }
    let mut pairs = Vec::with_capacity(body.len());
    for (line, toks) in body {
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected `k probability`, found {} field(s)", toks.len()),
            });
        }
        let k: u32 = parse_num(toks[0], *line, "degree")?;
        if k == 0 && !allow_zero {
            return Err(Error::Parse { line: *line, message: "degree must be at least 1".into() });
        }
        let p: f64 = parse_num(toks[1], *line, "probability")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parse {
                line: *line,
                message: format!("probability {p} outside [0, 1]"),
            });
        }
        pairs.push((k, p));
    }
    Ok(pairs)
}

/// Non-empty lines split into tokens. A line of `k:p` tokens, optionally
/// after a leading keyword, expands into one `k p` entry per token.
fn tokenize(text: &str) -> Vec<(usize, Vec<&str>)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let skip = toks.first().is_some_and(|t| *t == "explicit" || *t == "offspring") as usize;
        let pairs = &toks[skip..];
        if pairs.is_empty() || !pairs.iter().all(|t| t.contains(':')) {
            if !toks.is_empty() {
                out.push((i + 1, toks));
            }
            continue;
        }
        if skip == 1 {
            out.push((i + 1, vec![toks[0]]));
        }
        for t in pairs {
            let (k, p) = t.split_once(':').expect("checked above");
            out.push((i + 1, vec![k, p]));
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} from `{tok}`"),
    })
}

fn parse_cutoff(tok: &str, line: usize) -> Result<Cutoff> {
    if tok == "auto" {
        Ok(Cutoff::Auto)
    } else {
        Ok(Cutoff::Fixed(parse_num(tok, line, "cutoff")?))
    }
}
