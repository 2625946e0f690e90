use std::collections::BTreeMap;

use rand::Rng;

use super::belief::{normalize_subgame_weights, BeliefState, FULL_GAME, NUM_SUBGAMES};
use super::{best_response, uncertainty, UtilityMatrix, SIG_MAX};
use crate::fleet::{AttackOutcome, AttackerView, DroneId};
use crate::signal::{Dbm, StrategyIndex, NOISE_FLOOR_DBM, NUM_STRATEGIES};
use crate::SimRng;

/// Observed signal strength mapped from (−100, 20] dBm onto (0, 1].
pub fn criticality(received: Dbm) -> f64 {
    (received.0 - NOISE_FLOOR_DBM) / 120.0
}

/// Attacker subgame weights: share of audible drones per received-signal range.
pub fn attacker_subgame_probs(view: &AttackerView) -> [f64; NUM_SUBGAMES] {
    let counts = view.band_counts();
    let mut w = [0.0; NUM_SUBGAMES];
    for (band, &n) in counts.iter().enumerate() {
        let k = match band + 1 {
            1..=3 => 1,
            4..=7 => 2,
            _ => 3,
        };
        w[k] += n as f64;
    }
    normalize_subgame_weights(w)
}

/// Gain and loss terms of the attacker's utility for one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackerUtilityTerms {
    /// Expected impact on the targets.
    pub ai: f64,
    /// Cost of the attack, `e^{|S|−ζ}`.
    pub ac: f64,
}

impl AttackerUtilityTerms {
    /// `ai + dc − di − ac` with `di = 1 − ai` and `dc = j/10 + ai`.
    pub fn utility(&self, j: StrategyIndex) -> f64 {
        let di = 1.0 - self.ai;
        let dc = j.get() as f64 / SIG_MAX as f64 + self.ai;
        (self.ai + dc) - (di + self.ac)
    }
}

/// Hypergame attacker.
#[derive(Debug, Clone)]
pub struct AttackerHt {
    pub belief: BeliefState,
    pub lambda: f64,
    /// Per-episode uncertainty scale, drawn from [0, 0.5].
    pub ad: f64,
    /// Attacks launched this episode.
    pub attacks: u64,
    /// Per-drone (successes, attempts) across the whole run.
    history: BTreeMap<DroneId, (u32, u32)>,
    rng: SimRng,
}

impl AttackerHt {
    pub fn new(lambda: f64, rng: SimRng) -> Self {
        Self {
            belief: BeliefState::attacker(),
            lambda,
            ad: 0.0,
            attacks: 0,
            history: BTreeMap::new(),
            rng,
        }
    }

    /// Resets episode counters and draws a fresh `ad`.
    pub fn begin_episode(&mut self) {
        self.attacks = 0;
        self.ad = self.rng.random_range(0.0..=0.5);
    }

    pub fn g(&self) -> f64 {
        uncertainty(self.lambda, self.ad, self.attacks)
    }

    /// Laplace-smoothed attack success rate against one drone.
    pub fn success_rate(&self, id: DroneId) -> f64 {
        let (s, n) = self.history.get(&id).copied().unwrap_or((0, 0));
        (s as f64 + 1.0) / (n as f64 + 2.0)
    }

    pub fn terms(&self, view: &AttackerView, i: StrategyIndex) -> AttackerUtilityTerms {
        let zeta = view.zeta.max(1) as f64;
        let mut n = 0usize;
        let mut ai = 0.0;
        for t in view.targets(i) {
            n += 1;
            ai += self.success_rate(t.id) * criticality(t.received);
        }
        AttackerUtilityTerms { ai: ai / zeta, ac: (n as f64 - zeta).exp() }
    }

    pub fn utility_matrix(&self, view: &AttackerView) -> UtilityMatrix {
        let terms: Vec<_> = StrategyIndex::all().map(|i| self.terms(view, i)).collect();
        UtilityMatrix::from_fn(NUM_STRATEGIES, |i, j| terms[i].utility(StrategyIndex::from_zero_based(j)))
    }

    /// Chooses an attack band; the uncertainty gate decides full game vs subgames.
    pub fn select(&mut self, view: &AttackerView) -> StrategyIndex {
        let u = self.utility_matrix(view);
        let pr: f64 = self.rng.random();
        let probs = if pr < self.g() { FULL_GAME } else { attacker_subgame_probs(view) };
        self.belief.set_probs(probs);
        self.attacks += 1;
        best_response(&u, self.belief.aggregated(), self.g())
    }

    /// Learns from the round: the strongest signal is taken as the honey-drone level.
    pub fn observe(&mut self, view: &AttackerView, outcome: &AttackOutcome) {
        if let Some(top) = view.strongest() {
            self.belief.observe(top.band);
        }
        for id in &outcome.targets {
            let e = self.history.entry(*id).or_insert((0, 0));
            e.1 += 1;
            if outcome.compromised.contains(id) {
                e.0 += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fleet::Sighting;
    use rand::SeedableRng;

    fn s(i: i64) -> StrategyIndex {
        StrategyIndex::new(i).unwrap()
    }

    fn view(bands: &[(DroneId, f64, i64)], zeta: usize) -> AttackerView {
        AttackerView {
            round: 0,
            zeta,
            sightings: bands.iter().map(|&(id, r, b)| Sighting { id, received: Dbm(r), band: s(b) }).collect(),
        }
    }

    #[test]
    fn empty_target_set() {
        let a = AttackerHt::new(1.0, SimRng::seed_from_u64(0));
        let t = a.terms(&view(&[], 5), s(4));
        assert_eq!(t.ai, 0.0);
        for j in 1..=10 {
            let expect = (j as f64 / 10.0) - (1.0 + (-5.0f64).exp());
            assert!((t.utility(s(j)) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn full_budget_cost_is_one() {
        let a = AttackerHt::new(1.0, SimRng::seed_from_u64(0));
        let v = view(&[(1, -50.0, 10), (2, -51.0, 10), (3, -52.0, 10)], 3);
        assert_eq!(a.terms(&v, s(10)).ac, 1.0);
    }

    #[test]
    fn certain_success_at_full_strength() {
        let mut a = AttackerHt::new(1.0, SimRng::seed_from_u64(0));
        for id in 1..=2 {
            a.history.insert(id, (1_000_000, 1_000_000));
        }
        let v = view(&[(1, 20.0, 10), (2, 20.0, 10)], 2);
        assert!((a.terms(&v, s(10)).ai - 1.0).abs() < 1e-5);
    }

    #[test]
    fn subgame_probs_count_drones() {
        let v = view(&[(1, -99.0, 1), (2, -99.0, 1), (3, -95.0, 3), (4, -95.0, 3)], 5);
        assert_eq!(attacker_subgame_probs(&v), [0.0, 1.0, 0.0, 0.0]);
        let v = view(&[(1, -99.0, 1), (2, -99.0, 1), (3, -70.0, 9), (4, -50.0, 10)], 5);
        assert_eq!(attacker_subgame_probs(&v), [0.0, 0.5, 0.0, 0.5]);
        assert_eq!(attacker_subgame_probs(&view(&[], 5)), FULL_GAME);
    }

    #[test]
    fn failed_attacks_lower_success_rate() {
        let mut a = AttackerHt::new(1.0, SimRng::seed_from_u64(0));
        let v = view(&[(9, -40.0, 10)], 5);
        let miss = AttackOutcome { targets: vec![9], alerts: 1, ..Default::default() };
        a.observe(&v, &miss);
        assert!((a.success_rate(9) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.belief.counts(0)[9], 2.0);
    }

    #[test]
    fn prefers_populated_strong_band() {
        let mut a = AttackerHt::new(1.0, SimRng::seed_from_u64(3));
        a.begin_episode();
        let v = view(&[(1, -40.0, 10), (2, -45.0, 10), (3, -90.0, 4)], 5);
        assert_eq!(a.select(&v), s(10));
    }
}
