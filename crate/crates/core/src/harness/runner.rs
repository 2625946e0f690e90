//! Multi-seed experiment driver.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::defenses::{AttackKind, AttackerAgent, DefenderAgent, DefenseKind, FleetMode, Selector};
use crate::error::Result;
use crate::fleet::World;
use crate::hypergame::{AttackerHt, DefenderHt};
use crate::learning::encoding::{attacker_reward, defender_reward, defender_state_dim, ATTACKER_STATE_DIM};
use crate::learning::{A2cAgent, ApdFilter};
use crate::signal::{build_range_table, NUM_STRATEGIES};
use crate::derive_rng;

// rng streams
const WORLD: u64 = 1;
const DEFENDER: u64 = 2;
const ATTACKER: u64 = 3;
const WARMUP_WORLD: u64 = 4;
const WARMUP_DEFENDER: u64 = 5;
const WARMUP_ATTACKER: u64 = 6;
const WARMUP_OPPONENT: u64 = 7;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EpisodeMetrics {
    /// Completed cells over all cells.
    pub r_mc: f64,
    /// Energy spent by the fleet, mW·rounds.
    pub ec: f64,
    /// Mean active connected drones per round.
    pub mean_n_ac: f64,
    pub g_a: f64,
    pub g_d: f64,
    pub compromised: usize,
    pub rounds: u32,
    pub defense_freq: [u64; NUM_STRATEGIES],
    pub attack_freq: [u64; NUM_STRATEGIES],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub scheme: DefenseKind,
    pub attack: AttackKind,
    pub seed: u64,
    pub episode: u32,
    pub metrics: EpisodeMetrics,
    pub defender_rewards: Vec<f64>,
    pub attacker_rewards: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub config: ExperimentConfig,
    /// Sorted by scheme, attack, seed, episode.
    pub records: Vec<EpisodeRecord>,
}

/// One `(defense, attack, seed)` run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Job {
    pub defense: DefenseKind,
    pub attack: AttackKind,
    pub seed: u64,
}

pub fn jobs(cfg: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &defense in &cfg.experiment.defenses {
        for &attack in &cfg.experiment.attacks {
            for &seed in &cfg.experiment.seeds {
                out.push(Job { defense, attack, seed });
            }
        }
    }
    out
}

/// World for one episode; every scheme sees the same stream at a given seed and episode.
pub fn make_world(cfg: &ExperimentConfig, defense: DefenseKind, stream: u64, seed: u64, episode: u32) -> Result<World> {
    let mut scenario = cfg.scenario.clone();
    if defense.fleet_mode() == FleetMode::NoHds {
        scenario.num_hds = 0;
    }
    World::new(
        scenario,
        build_range_table(),
        defense.mitigation(cfg.defense.ids_detect_prob),
        derive_rng(seed, stream, episode as u64),
    )
}

fn defender_agent(cfg: &ExperimentConfig, defense: DefenseKind, attack: AttackKind, seed: u64, stream: u64) -> Result<DefenderAgent> {
    let rng = derive_rng(seed, stream, 0);
    Ok(match defense.selector() {
        Selector::Fixed => DefenderAgent::Fixed(cfg.defense.fixed_level),
        Selector::Ht => DefenderAgent::Ht(DefenderHt::new(
            cfg.hypergame.lambda_defender,
            cfg.hypergame.defender_subgame_with_nine,
            rng,
        )),
        Selector::Drl | Selector::HtDrl => {
            let mut agent = A2cAgent::new(defender_state_dim(cfg.scenario.num_cells()), cfg.learning.clone(), rng)?;
            if defense.selector() == Selector::HtDrl {
                agent = agent.with_filter(pretrain_defender_apd(cfg, attack, seed)?);
            }
            DefenderAgent::drl(agent)
        }
    })
}

fn attacker_agent(cfg: &ExperimentConfig, defense: DefenseKind, attack: AttackKind, seed: u64, stream: u64) -> Result<AttackerAgent> {
    let rng = derive_rng(seed, stream, 0);
    Ok(match attack.selector() {
        Selector::Fixed => AttackerAgent::Fixed(cfg.attack.fixed_band),
        Selector::Ht => AttackerAgent::Ht(AttackerHt::new(cfg.hypergame.lambda_attacker, rng)),
        Selector::Drl | Selector::HtDrl => {
            let mut agent = A2cAgent::new(ATTACKER_STATE_DIM, cfg.learning.clone(), rng)?;
            if attack.selector() == Selector::HtDrl {
                agent = agent.with_filter(pretrain_attacker_apd(cfg, defense, seed)?);
            }
            AttackerAgent::drl(agent)
        }
    })
}

/// Hypergame stand-in for an HT-DRL opponent during warm-up.
fn warmup_defense(d: DefenseKind) -> DefenseKind {
    if d == DefenseKind::HdHtDrl {
        DefenseKind::HdHt
    } else {
        d
    }
}

fn warmup_attack(a: AttackKind) -> AttackKind {
    if a == AttackKind::HtDrl {
        AttackKind::Ht
    } else {
        a
    }
}

/// Runs a hypergame defender for the warm-up episodes and turns its choices into a filter.
pub fn pretrain_defender_apd(cfg: &ExperimentConfig, attack: AttackKind, seed: u64) -> Result<ApdFilter> {
    let mut defender = defender_agent(cfg, DefenseKind::HdHt, attack, seed, WARMUP_DEFENDER)?;
    let mut attacker = attacker_agent(cfg, DefenseKind::HdHt, warmup_attack(attack), seed, WARMUP_OPPONENT)?;
    let mut counts = [0u64; NUM_STRATEGIES];
    for ep in 0..cfg.experiment.warmup_episodes {
        let world = make_world(cfg, DefenseKind::HdHt, WARMUP_WORLD, seed, ep)?;
        let rec = run_episode(world, &mut defender, &mut attacker, cfg.experiment.metric_gamma)?;
        for k in 0..NUM_STRATEGIES {
            counts[k] += rec.metrics.defense_freq[k];
        }
    }
    Ok(ApdFilter::from_choices(&counts, cfg.learning.filter_floor))
}

/// Attacker analogue of [`pretrain_defender_apd`].
pub fn pretrain_attacker_apd(cfg: &ExperimentConfig, defense: DefenseKind, seed: u64) -> Result<ApdFilter> {
    let defense = warmup_defense(defense);
    let mut defender = defender_agent(cfg, defense, AttackKind::Ht, seed, WARMUP_OPPONENT)?;
    let mut attacker = attacker_agent(cfg, defense, AttackKind::Ht, seed, WARMUP_ATTACKER)?;
    let mut counts = [0u64; NUM_STRATEGIES];
    for ep in 0..cfg.experiment.warmup_episodes {
        let world = make_world(cfg, defense, WARMUP_WORLD, seed, ep)?;
        let rec = run_episode(world, &mut defender, &mut attacker, cfg.experiment.metric_gamma)?;
        for k in 0..NUM_STRATEGIES {
            counts[k] += rec.metrics.attack_freq[k];
        }
    }
    Ok(ApdFilter::from_choices(&counts, cfg.learning.filter_floor))
}

/// Plays one mission to the end. Agents learn as they go.
pub fn run_episode(
    mut world: World,
    defender: &mut DefenderAgent,
    attacker: &mut AttackerAgent,
    gamma: f64,
) -> Result<EpisodeRecord> {
    defender.begin_episode();
    attacker.begin_episode();
    let mut m = EpisodeMetrics::default();
    let mut defender_rewards = Vec::new();
    let mut attacker_rewards = Vec::new();
    let mut n_ac_total = 0.0;
    let mut discount = 1.0;
    while !world.is_terminated() {
        let j = defender.select(&world)?;
        let report = world.step_round(j, attacker)?;
        defender.observe(&report, &world);
        attacker.observe(&report);

        let (rd, ra) = (defender_reward(&report), attacker_reward(&report));
        m.g_d += discount * rd;
        m.g_a += discount * ra;
        discount *= gamma;
        defender_rewards.push(rd);
        attacker_rewards.push(ra);
        m.ec += report.energy_spent;
        n_ac_total += report.n_active_connected as f64;
        m.defense_freq[j.zero_based()] += 1;
        if let Some(i) = report.attack.strategy {
            m.attack_freq[i.zero_based()] += 1;
        }
        m.rounds += 1;
    }
    defender.end_episode();
    attacker.end_episode();
    m.r_mc = world.completion_ratio();
    m.mean_n_ac = if m.rounds > 0 { n_ac_total / m.rounds as f64 } else { 0.0 };
    m.compromised = world.total_compromised();
    Ok(EpisodeRecord {
        scheme: DefenseKind::HdHt,
        attack: AttackKind::Fixed,
        seed: 0,
        episode: 0,
        metrics: m,
        defender_rewards,
        attacker_rewards,
    })
}

/// All episodes of one job; agents carry over between episodes, worlds do not.
pub fn run_job(cfg: &ExperimentConfig, job: Job) -> Result<Vec<EpisodeRecord>> {
    let mut defender = defender_agent(cfg, job.defense, job.attack, job.seed, DEFENDER)?;
    let mut attacker = attacker_agent(cfg, job.defense, job.attack, job.seed, ATTACKER)?;
    let mut out = Vec::with_capacity(cfg.experiment.episodes as usize);
    for ep in 0..cfg.experiment.episodes {
        let world = make_world(cfg, job.defense, WORLD, job.seed, ep)?;
        let mut rec = run_episode(world, &mut defender, &mut attacker, cfg.experiment.metric_gamma)?;
        rec.scheme = job.defense;
        rec.attack = job.attack;
        rec.seed = job.seed;
        rec.episode = ep;
        out.push(rec);
    }
    Ok(out)
}

/// Runs jobs one after another.
pub fn run_jobs_sequential(cfg: &ExperimentConfig, jobs: &[Job]) -> Result<Vec<EpisodeRecord>> {
    let mut out = Vec::new();
    for &job in jobs {
        out.extend(run_job(cfg, job)?);
    }
    Ok(out)
}

/// Runs jobs on the rayon pool; output order matches `jobs`.
#[cfg(feature = "parallel")]
pub fn run_jobs_parallel(cfg: &ExperimentConfig, jobs: &[Job]) -> Result<Vec<EpisodeRecord>> {
    use rayon::prelude::*;
    let per_job: Vec<Result<Vec<EpisodeRecord>>> = jobs.par_iter().map(|&job| run_job(cfg, job)).collect();
    let mut out = Vec::new();
    for r in per_job {
        out.extend(r?);
    }
    Ok(out)
}

pub fn run_jobs(cfg: &ExperimentConfig, jobs: &[Job]) -> Result<Vec<EpisodeRecord>> {
    #[cfg(feature = "parallel")]
    {
        run_jobs_parallel(cfg, jobs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_jobs_sequential(cfg, jobs)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Dataset> {
    cfg.validate()?;
    let mut records = run_jobs(cfg, &jobs(cfg))?;
    records.sort_by_key(|r| (r.scheme, r.attack, r.seed, r.episode));
    Ok(Dataset { config: cfg.clone(), records })
}

/// One dataset per attack budget, all on the same seeds.
pub fn sweep_zeta(cfg: &ExperimentConfig, values: &[usize]) -> Result<Vec<(usize, Dataset)>> {
    if values.is_empty() {
        return Err(crate::Error::Config("no zeta values given".into()));
    }
    let mut out = Vec::with_capacity(values.len());
    for &z in values {
        let mut c = cfg.clone();
        c.scenario.zeta = z;
        c.validate()?;
        out.push((z, run_experiment(&c)?));
    }
    Ok(out)
}
