use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::defenses::{AttackKind, DefenseKind};
use crate::error::{Error, Result};
use crate::fleet::ScenarioParams;
use crate::learning::A2cConfig;
use crate::signal::StrategyIndex;

/// Environment variable that replaces the seed list, e.g. `HDS_SEED=1,2`.
pub const SEED_ENV: &str = "HDS_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub seeds: Vec<u64>,
    pub episodes: u32,
    /// Hypergame episodes used to build the APD filter of HT-DRL players.
    pub warmup_episodes: u32,
    pub defenses: Vec<DefenseKind>,
    pub attacks: Vec<AttackKind>,
    pub output_dir: PathBuf,
    /// Discount for the accumulated-reward metrics.
    pub metric_gamma: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            seeds: vec![1],
            episodes: 1,
            warmup_episodes: 5,
            defenses: vec![DefenseKind::HdHtDrl],
            attacks: vec![AttackKind::Fixed],
            output_dir: PathBuf::from("results"),
            metric_gamma: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HypergameSection {
    pub lambda_attacker: f64,
    pub lambda_defender: f64,
    /// Put attack band 9 in the defender's third subgame.
    pub defender_subgame_with_nine: bool,
}

impl Default for HypergameSection {
    fn default() -> Self {
        Self { lambda_attacker: 1.0, lambda_defender: 1.0, defender_subgame_with_nine: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DefenseSection {
    /// Level used by HD-F and by the mission drones of non-HD schemes.
    pub fixed_level: StrategyIndex,
    pub ids_detect_prob: f64,
}

impl Default for DefenseSection {
    fn default() -> Self {
        Self { fixed_level: StrategyIndex::new(10).expect("valid"), ids_detect_prob: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackSection {
    pub fixed_band: StrategyIndex,
}

impl Default for AttackSection {
    fn default() -> Self {
        Self { fixed_band: StrategyIndex::new(10).expect("valid") }
    }
}

/// Everything one experiment needs; read from TOML.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub scenario: ScenarioParams,
    pub hypergame: HypergameSection,
    pub defense: DefenseSection,
    pub attack: AttackSection,
    pub learning: A2cConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        if e.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if e.episodes == 0 {
            return Err(Error::Config("episodes must be >= 1".into()));
        }
        if e.warmup_episodes == 0 && self.uses_apd() {
            return Err(Error::Config("HT-DRL players need warmup_episodes >= 1".into()));
        }
        if e.defenses.is_empty() || e.attacks.is_empty() {
            return Err(Error::Config("need at least one defense and one attack scheme".into()));
        }
        if !(0.0..=1.0).contains(&e.metric_gamma) {
            return Err(Error::Config("metric_gamma must lie in [0, 1]".into()));
        }
        let h = &self.hypergame;
        if !(h.lambda_attacker > 0.0) || !(h.lambda_defender > 0.0) {
            return Err(Error::Config("lambda values must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.defense.ids_detect_prob) {
            return Err(Error::Config("ids_detect_prob must lie in [0, 1]".into()));
        }
        self.scenario.validate()?;
        self.learning.validate()
    }

    fn uses_apd(&self) -> bool {
        self.experiment.defenses.contains(&DefenseKind::HdHtDrl) || self.experiment.attacks.contains(&AttackKind::HtDrl)
    }

    /// Applies `HDS_SEED` when set.
    pub fn apply_seed_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.experiment.seeds = parse_seed_list(&v)?;
        }
        Ok(())
    }
}

/// Parses `"1,2,3"`.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    let seeds = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| Error::Config(format!("bad seed {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if seeds.is_empty() {
        return Err(Error::Config("empty seed list".into()));
    }
    Ok(seeds)
}
