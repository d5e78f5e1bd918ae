//! Run configuration: every output embeds the resolved [`RunConfig`], and the
//! same config reproduces the output byte for byte.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spinwire_core::protocols::ProtocolId;
use spinwire_core::{BlochVector, ChainSpec, WireStateSpec};

use crate::state_io;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Transfer,
    Expand,
    Mirror,
    Scan,
    Batch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Engineered,
    Uniform,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WireKind {
    AllDown,
    RandomPure,
    RandomMixed,
    /// State read from `wire_file`.
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    /// Canonical operator lines, `expand` only.
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub j: f64,
    pub b: f64,
    pub profile: ProfileKind,
    pub couplings: Option<Vec<f64>>,
    pub protocol: ProtocolId,
    pub r: [f64; 3],
    pub wire: WireKind,
    pub wire_file: Option<PathBuf>,
    pub seed: u64,
    /// Rank of a random mixed wire; full rank when absent.
    pub rank: Option<usize>,
    /// Forced `(j, k)` outcomes of the measurement-assisted protocol.
    pub outcomes: Option<[f64; 2]>,
    pub tol: f64,
    pub op: Option<String>,
    pub depth: usize,
    pub verify_matrix: bool,
    pub samples: usize,
    pub points: usize,
    pub t_min: f64,
    /// Defaults to `2π / J`.
    pub t_max: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Transfer,
            n: 4,
            j: 1.0,
            b: 0.0,
            profile: ProfileKind::Engineered,
            couplings: None,
            protocol: ProtocolId::TwoQubitCode,
            r: [1.0, 0.0, 0.0],
            wire: WireKind::AllDown,
            wire_file: None,
            seed: 0,
            rank: None,
            outcomes: None,
            tol: 1e-9,
            op: None,
            depth: 2,
            verify_matrix: false,
            samples: 100,
            points: 201,
            t_min: 0.0,
            t_max: None,
            output: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    /// Overlays the keys of a TOML file onto `self`; keys in the file win.
    pub fn overlay_file(self, path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.overlay_toml(&text)
            .with_context(|| format!("in {}", path.display()))
    }

    pub fn overlay_toml(self, text: &str) -> anyhow::Result<Self> {
        let file: toml::Table = toml::from_str(text)?;
        let mut merged = serde_json::to_value(&self)?;
        let fields = merged
            .as_object_mut()
            .expect("config serializes to an object");
        for (key, value) in serde_json::to_value(file)?
            .as_object()
            .expect("table")
            .clone()
        {
            fields.insert(key, value);
        }
        Ok(serde_json::from_value(merged)?)
    }

    pub fn chain_spec(&self) -> anyhow::Result<ChainSpec> {
        let spec = match (self.profile, &self.couplings) {
            (ProfileKind::Engineered, None) => ChainSpec::engineered(self.n, self.j)?,
            (ProfileKind::Uniform, None) => ChainSpec::uniform(self.n, self.j)?,
            (ProfileKind::Custom, Some(c)) => {
                let mut spec = ChainSpec::custom(self.n, c.clone())?;
                spec.j = self.j;
                spec.validate()?;
                spec
            }
            (ProfileKind::Custom, None) => bail!("profile `custom` needs --couplings"),
            (profile, Some(_)) => {
                bail!("--couplings cannot be combined with profile `{profile:?}`")
            }
        };
        Ok(spec.with_field(self.b))
    }

    pub fn bloch(&self) -> BlochVector {
        self.r.into()
    }

    pub fn wire_spec(&self, sites: usize) -> anyhow::Result<WireStateSpec> {
        Ok(match self.wire {
            WireKind::AllDown => WireStateSpec::AllDown,
            WireKind::RandomPure => WireStateSpec::RandomPure { seed: self.seed },
            WireKind::RandomMixed => WireStateSpec::RandomMixed {
                seed: self.seed,
                rank: self.rank.unwrap_or(1 << sites),
            },
            WireKind::File => {
                let path = self
                    .wire_file
                    .as_ref()
                    .context("wire `file` needs --wire-file")?;
                WireStateSpec::Explicit(state_io::load_state(path)?)
            }
        })
    }

    pub fn time_grid(&self) -> anyhow::Result<Vec<f64>> {
        if self.points == 0 {
            bail!("--points must be at least 1");
        }
        let t_max = self.t_max.unwrap_or(2.0 * std::f64::consts::PI / self.j);
        if self.points == 1 {
            return Ok(vec![self.t_min]);
        }
        let step = (t_max - self.t_min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| self.t_min + k as f64 * step)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_override_flags() {
        let flags = RunConfig {
            n: 6,
            seed: 3,
            ..RunConfig::default()
        };
        let merged = flags
            .overlay_toml("n = 8\nprotocol = \"difranco\"\nr = [0.0, 0.0, 1.0]\n")
            .unwrap();
        assert_eq!(merged.n, 8);
        assert_eq!(merged.seed, 3);
        assert_eq!(merged.protocol, ProtocolId::DiFranco);
        assert_eq!(merged.r, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::default().overlay_toml("sites = 4").is_err());
    }

    #[test]
    fn profiles_build_chains() {
        let custom = RunConfig {
            n: 3,
            profile: ProfileKind::Custom,
            couplings: Some(vec![1.0, 5.0]),
            ..RunConfig::default()
        };
        assert_eq!(custom.chain_spec().unwrap().couplings(), vec![1.0, 5.0]);
        let missing = RunConfig {
            profile: ProfileKind::Custom,
            ..RunConfig::default()
        };
        assert!(missing.chain_spec().is_err());
    }

    #[test]
    fn grid_spans_two_periods_by_default() {
        let grid = RunConfig::default().time_grid().unwrap();
        assert_eq!(grid.len(), 201);
        assert!((grid[100] - std::f64::consts::PI).abs() < 1e-12);
    }
}
