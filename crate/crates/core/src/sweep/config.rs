use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::degree::LawDescriptor;
use crate::error::{Error, Result};
use crate::fpp::DiameterMode;
use crate::graph::DEFAULT_MAX_ATTEMPTS;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphMode {
    /// Uniform simple graph by rejection.
    #[default]
    Simple,
    /// Configuration-model multigraph, loops and parallel edges kept.
    Multigraph,
    /// `G(n, mu0/n)` with isolated vertices removed.
    Gnp,
    /// `G(n, round(mu0 n / 2))` with isolated vertices removed.
    Gnm,
}

impl fmt::Display for GraphMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphMode::Simple => "simple",
            GraphMode::Multigraph => "multigraph",
            GraphMode::Gnp => "gnp",
            GraphMode::Gnm => "gnm",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub jsonl: Option<PathBuf>,
    pub aggregates: Option<PathBuf>,
}

/// A sweep over graph sizes; `configs/` in the repository has commented
/// instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Degree-law descriptor text.
    pub law: String,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub graph_mode: GraphMode,
    #[serde(default = "default_diameter_mode")]
    pub diameter_mode: DiameterMode,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Sources per trial for phase timing.
    #[serde(default = "default_phase_sources")]
    pub phase_sources: usize,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    /// Record wall-clock time; off by default so repeated runs are byte-identical.
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_diameter_mode() -> DiameterMode {
    DiameterMode::Exact
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_phase_sources() -> usize {
    8
}

fn default_max_attempts() -> usize {
    DEFAULT_MAX_ATTEMPTS
}

impl SweepConfig {
    /// A config with defaults for every optional field.
    pub fn new(law: &str, n_grid: Vec<usize>, trials: usize, master_seed: u64) -> Self {
        Self {
            law: law.to_owned(),
            n_grid,
            trials,
            master_seed,
            graph_mode: GraphMode::default(),
            diameter_mode: default_diameter_mode(),
            epsilon: default_epsilon(),
            phase_sources: default_phase_sources(),
            max_attempts: default_max_attempts(),
            record_wall_time: false,
            output: OutputPaths::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(1, |s| text[..s.start].lines().count().max(1)),
            message: e.message().to_owned(),
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config; relative output paths resolve against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut config = Self::from_toml(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for slot in [&mut config.output.csv, &mut config.output.jsonl, &mut config.output.aggregates] {
            if let Some(p) = slot.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn descriptor(&self) -> Result<LawDescriptor> {
        LawDescriptor::parse(&self.law)
    }

    pub fn validate(&self) -> Result<()> {
        self.descriptor()?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::InvalidArgument("n_grid is empty".into()));
        }
        if self.n_grid[0] < 2 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("n_grid must be strictly increasing and start at 2 or more".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("epsilon {} outside (0, 1)", self.epsilon)));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidArgument("max_attempts must be at least 1".into()));
        }
        Ok(())
    }

    /// `"<graph mode>+<diameter mode>"` as written in the `mode` column.
    pub fn mode_label(&self) -> String {
        format!("{}+{}", self.graph_mode, self.diameter_mode)
    }

    /// `(name, value)` pairs of the resolved config in a fixed order.
    pub fn resolved(&self) -> Vec<(&'static str, String)> {
        let grid: Vec<String> = self.n_grid.iter().map(|n| n.to_string()).collect();
        let path = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_owned(), |p| p.display().to_string());
        vec![
            ("law", self.descriptor().map_or_else(|_| self.law.clone(), |d| d.to_string())),
            ("n_grid", grid.join(",")),
            ("trials", self.trials.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("graph_mode", self.graph_mode.to_string()),
            ("diameter_mode", self.diameter_mode.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("phase_sources", self.phase_sources.to_string()),
            ("max_attempts", self.max_attempts.to_string()),
            ("record_wall_time", self.record_wall_time.to_string()),
            ("output.csv", path(&self.output.csv)),
            ("output.jsonl", path(&self.output.jsonl)),
            ("output.aggregates", path(&self.output.aggregates)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = SweepConfig::from_toml("law = \"regular 3\"\nn_grid = [100, 1000]\ntrials = 2\nmaster_seed = 7\n").unwrap();
        assert_eq!(c.graph_mode, GraphMode::Simple);
        assert_eq!(c.diameter_mode, DiameterMode::Exact);
        assert_eq!(c.mode_label(), "simple+exact");
        assert_eq!(c, SweepConfig::new("regular 3", vec![100, 1000], 2, 7));
    }

    #[test]
    fn toml_roundtrip() {
        let mut c = SweepConfig::new("explicit\n1 0.5\n3 0.5\n", vec![50], 3, 1);
        c.graph_mode = GraphMode::Multigraph;
        c.diameter_mode = DiameterMode::AnchoredLowerBound;
        c.output.csv = Some("out.csv".into());
        assert_eq!(SweepConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "law = \"regular 3\"\nn_grid = [100, 100]\ntrials = 2\nmaster_seed = 7\n",
            "law = \"regular 3\"\nn_grid = [100]\ntrials = 0\nmaster_seed = 7\n",
            "law = \"regular x\"\nn_grid = [100]\ntrials = 1\nmaster_seed = 7\n",
            "law = \"regular 3\"\nn_grid = [100]\ntrials = 1\nmaster_seed = 7\nbogus = 1\n",
            "law = \"regular 3\"\nn_grid = [100]\ntrials = 1\nmaster_seed = 7\ngraph_mode = \"tree\"\n",
        ];
        for text in bad {
            assert!(SweepConfig::from_toml(text).is_err(), "{text}");
        }
    }
}
