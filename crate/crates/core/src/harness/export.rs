//! CSV and manifest output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::runner::{Dataset, EpisodeRecord};
use crate::defenses::{AttackKind, DefenseKind};
use crate::error::Result;

/// Scalar per-episode metrics, one CSV each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    RMc,
    Ec,
    NAc,
    GA,
    GD,
    Compromised,
    Rounds,
}

impl Metric {
    pub const ALL: [Metric; 7] =
        [Metric::RMc, Metric::Ec, Metric::NAc, Metric::GA, Metric::GD, Metric::Compromised, Metric::Rounds];

    pub fn name(self) -> &'static str {
        match self {
            Metric::RMc => "r_mc",
            Metric::Ec => "ec",
            Metric::NAc => "n_ac",
            Metric::GA => "g_a",
            Metric::GD => "g_d",
            Metric::Compromised => "compromised",
            Metric::Rounds => "rounds",
        }
    }

    pub fn value(self, r: &EpisodeRecord) -> f64 {
        let m = &r.metrics;
        match self {
            Metric::RMc => m.r_mc,
            Metric::Ec => m.ec,
            Metric::NAc => m.mean_n_ac,
            Metric::GA => m.g_a,
            Metric::GD => m.g_d,
            Metric::Compromised => m.compromised as f64,
            Metric::Rounds => m.rounds as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub scheme: DefenseKind,
    pub attack: AttackKind,
    pub seed: u64,
    pub episode: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub scheme: DefenseKind,
    pub attack: AttackKind,
    pub seed: u64,
    pub episode: u32,
    pub strategy_index: u8,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardRow {
    pub scheme: DefenseKind,
    pub attack: AttackKind,
    pub seed: u64,
    pub episode: u32,
    pub round: u32,
    pub defender: f64,
    pub attacker: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scheme: DefenseKind,
    pub attack: AttackKind,
    pub metric: String,
    pub episode: u32,
    pub mean: f64,
    pub stddev: f64,
    pub n: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    files: Vec<String>,
}

pub fn metric_rows(records: &[EpisodeRecord], metric: Metric) -> Vec<MetricRow> {
    records
        .iter()
        .map(|r| MetricRow { scheme: r.scheme, attack: r.attack, seed: r.seed, episode: r.episode, value: metric.value(r) })
        .collect()
}

/// Mean and sample standard deviation across seeds, per scheme, attack and episode.
pub fn summarize(records: &[EpisodeRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(DefenseKind, AttackKind, u32)> = records.iter().map(|r| (r.scheme, r.attack, r.episode)).collect();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for metric in Metric::ALL {
        for &(scheme, attack, episode) in &keys {
            let vals: Vec<f64> = records
                .iter()
                .filter(|r| r.scheme == scheme && r.attack == attack && r.episode == episode)
                .map(|r| metric.value(r))
                .collect();
            let (mean, stddev) = mean_std(&vals);
            out.push(SummaryRow { scheme, attack, metric: metric.name().into(), episode, mean, stddev, n: vals.len() });
        }
    }
    out
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn write_rows<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

const METRIC_HEADER: [&str; 5] = ["scheme", "attack", "seed", "episode", "value"];

/// Writes one CSV per metric, strategy-frequency and reward CSVs, a summary
/// and `manifest.json` into `dir`. On failure, files written so far are removed.
pub fn export_csv(dataset: &Dataset, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let result = write_all(dataset, dir, &mut written);
    if result.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
    }
    result.map(|_| written)
}

fn write_all(dataset: &Dataset, dir: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    let recs = &dataset.records;
    for metric in Metric::ALL {
        let path = dir.join(format!("{}.csv", metric.name()));
        written.push(path.clone());
        write_rows(&path, &METRIC_HEADER, &metric_rows(recs, metric))?;
    }

    let strategy_header = ["scheme", "attack", "seed", "episode", "strategy_index", "value"];
    for (name, defender) in [("defense_strategy_freq", true), ("attack_strategy_freq", false)] {
        let rows: Vec<StrategyRow> = recs
            .iter()
            .flat_map(|r| {
                let freq = if defender { r.metrics.defense_freq } else { r.metrics.attack_freq };
                (0..freq.len()).map(move |k| StrategyRow {
                    scheme: r.scheme,
                    attack: r.attack,
                    seed: r.seed,
                    episode: r.episode,
                    strategy_index: k as u8 + 1,
                    value: freq[k] as f64,
                })
            })
            .collect();
        let path = dir.join(format!("{name}.csv"));
        written.push(path.clone());
        write_rows(&path, &strategy_header, &rows)?;
    }

    let rows: Vec<RewardRow> = recs
        .iter()
        .flat_map(|r| {
            r.defender_rewards.iter().zip(&r.attacker_rewards).enumerate().map(move |(t, (&d, &a))| RewardRow {
                scheme: r.scheme,
                attack: r.attack,
                seed: r.seed,
                episode: r.episode,
                round: t as u32,
                defender: d,
                attacker: a,
            })
        })
        .collect();
    let path = dir.join("rewards.csv");
    written.push(path.clone());
    write_rows(&path, &["scheme", "attack", "seed", "episode", "round", "defender", "attacker"], &rows)?;

    let path = dir.join("summary.csv");
    written.push(path.clone());
    write_rows(&path, &["scheme", "attack", "metric", "episode", "mean", "stddev", "n"], &summarize(recs))?;

    let path = dir.join("manifest.json");
    written.push(path.clone());
    let files = written.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect();
    let manifest = Manifest { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), config: &dataset.config, files };
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

/// Reads back a per-metric CSV.
pub fn read_metric_csv(path: &Path) -> Result<Vec<MetricRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<MetricRow>, _>>()?;
    Ok(rows)
}

pub fn read_reward_csv(path: &Path) -> Result<Vec<RewardRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<RewardRow>, _>>()?;
    Ok(rows)
}
