use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::belief::{BeliefState, Dist, FULL_GAME, NUM_SUBGAMES};
use super::{best_response, uncertainty, UtilityMatrix, SIG_MAX};
use crate::fleet::{AttackOutcome, DroneId, World};
use crate::signal::{StrategyIndex, NUM_STRATEGIES};
use crate::SimRng;

/// What the defender knows about its own fleet when choosing a level.
#[derive(Debug, Clone, PartialEq)]
pub struct DefenderObservation {
    /// Connected drones if every drone switched to level `j`, zero-based by `j`.
    pub connect_estimates: [usize; NUM_STRATEGIES],
    /// Team size used to normalize connectivity.
    pub n_drone: usize,
    pub vul: BTreeMap<DroneId, f64>,
    pub zeta: usize,
}

impl DefenderObservation {
    pub fn from_world(world: &World) -> Self {
        let mut connect_estimates = [0; NUM_STRATEGIES];
        for j in StrategyIndex::all() {
            connect_estimates[j.zero_based()] = world.connected_if(j);
        }
        Self {
            connect_estimates,
            n_drone: world.initial_team_size(),
            vul: world.fleet().iter().map(|d| (d.id, d.vul)).collect(),
            zeta: world.params().zeta,
        }
    }
}

/// Defender subgame weights from `Σ_{j∈B_k} Σ_i c_ki · u_ji`, shifted to be
/// non-negative and normalized over subgames 1..=3.
pub fn defender_subgame_probs(belief: &BeliefState, u: &UtilityMatrix) -> [f64; NUM_SUBGAMES] {
    let mut score = [0.0; NUM_SUBGAMES - 1];
    for (k, sc) in score.iter_mut().enumerate() {
        let c = belief.cms(k + 1);
        let own = belief.subgame(k + 1);
        for j in 0..NUM_STRATEGIES {
            if own[j] {
                *sc += u.row(j).iter().zip(&c).map(|(u, c)| u * c).sum::<f64>();
            }
        }
    }
    let min = score.iter().copied().fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        for sc in &mut score {
            *sc -= min;
        }
    }
    let total: f64 = score.iter().sum();
    let mut p = [0.0; NUM_SUBGAMES];
    for k in 0..NUM_SUBGAMES - 1 {
        p[k + 1] = if total > 0.0 { score[k] / total } else { 1.0 / 3.0 };
    }
    p
}

/// Hypergame defender choosing honey-drone signal levels.
#[derive(Debug, Clone)]
pub struct DefenderHt {
    pub belief: BeliefState,
    pub lambda: f64,
    /// Honey-drone alerts this episode.
    pub alerts: u64,
    /// Drones seen targeted by each attack band, over the whole run.
    targets: Vec<BTreeSet<DroneId>>,
    rng: SimRng,
}

impl DefenderHt {
    pub fn new(lambda: f64, include_nine: bool, rng: SimRng) -> Self {
        Self {
            belief: BeliefState::defender(include_nine),
            lambda,
            alerts: 0,
            targets: vec![BTreeSet::new(); NUM_STRATEGIES],
            rng,
        }
    }

    pub fn begin_episode(&mut self) {
        self.alerts = 0;
    }

    pub fn g(&self) -> f64 {
        uncertainty(self.lambda, 1.0, self.alerts)
    }

    pub fn remembered_targets(&self, i: StrategyIndex) -> &BTreeSet<DroneId> {
        &self.targets[i.zero_based()]
    }

    /// `(di + ac) − (ai + dc)` for defense `j` against attack `i`.
    pub fn utility(&self, obs: &DefenderObservation, j: StrategyIndex, i: StrategyIndex) -> f64 {
        let zeta = obs.zeta.max(1) as f64;
        let remembered = &self.targets[i.zero_based()];
        let vul: f64 = remembered.iter().map(|id| obs.vul.get(id).copied().unwrap_or(0.0)).sum();
        let connected = obs.connect_estimates[j.zero_based()] as f64 / obs.n_drone.max(1) as f64;
        let di = 1.0 - vul / zeta + connected;
        let ac = remembered.len() as f64 / zeta;
        let ai = 1.0 - di;
        let dc = (j.get() as f64 - SIG_MAX as f64).exp();
        (di + ac) - (ai + dc)
    }

    pub fn utility_matrix(&self, obs: &DefenderObservation) -> UtilityMatrix {
        UtilityMatrix::from_fn(NUM_STRATEGIES, |j, i| {
            self.utility(obs, StrategyIndex::from_zero_based(j), StrategyIndex::from_zero_based(i))
        })
    }

    pub fn select(&mut self, obs: &DefenderObservation) -> StrategyIndex {
        let u = self.utility_matrix(obs);
        let pr: f64 = self.rng.random();
        let probs = if pr < self.g() { FULL_GAME } else { defender_subgame_probs(&self.belief, &u) };
        self.belief.set_probs(probs);
        best_response(&u, self.belief.aggregated(), self.g())
    }

    /// Honey-drone alerts reveal the attack band and its targets.
    pub fn observe(&mut self, outcome: &AttackOutcome) {
        if outcome.alerts == 0 {
            return;
        }
        self.alerts += outcome.alerts as u64;
        if let Some(i) = outcome.strategy {
            self.belief.observe(i);
            self.targets[i.zero_based()].extend(outcome.targets.iter().copied());
        }
    }

    pub fn aggregated(&self) -> &Dist {
        self.belief.aggregated()
    }
}
