use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{StrategyIndex, NUM_STRATEGIES};

/// Full game plus three restricted subgames.
pub const NUM_SUBGAMES: usize = 4;

pub type Dist = [f64; NUM_STRATEGIES];
pub type Mask = [bool; NUM_STRATEGIES];

/// Subgame probabilities that put all weight on the full game.
pub const FULL_GAME: [f64; NUM_SUBGAMES] = [1.0, 0.0, 0.0, 0.0];

/// Dirichlet counts over opponent strategies, per subgame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefState {
    counts: [Dist; NUM_SUBGAMES],
    subgames: [Mask; NUM_SUBGAMES],
    probs: [f64; NUM_SUBGAMES],
    aggregated: Dist,
}

impl BeliefState {
    /// Belief with a pseudo-count of 1 everywhere. `sets` are the 1-based
    /// opponent strategies of subgames 1..=3; subgame 0 is the full game.
    pub fn new(sets: [&[usize]; 3]) -> Result<Self> {
        let mut subgames = [[false; NUM_STRATEGIES]; NUM_SUBGAMES];
        subgames[0] = [true; NUM_STRATEGIES];
        for (k, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Config(format!("subgame {} is empty", k + 1)));
            }
            for &s in *set {
                let s = StrategyIndex::new(s as i64)?;
                subgames[k + 1][s.zero_based()] = true;
            }
        }
        Ok(Self {
            counts: [[1.0; NUM_STRATEGIES]; NUM_SUBGAMES],
            subgames,
            probs: FULL_GAME,
            aggregated: [1.0 / NUM_STRATEGIES as f64; NUM_STRATEGIES],
        })
    }

    /// Attacker's view of the defender: levels grouped by the received-signal
    /// ranges (−100, −93.8], (−93.8, −79.0] and (−79.0, 20].
    pub fn attacker() -> Self {
        Self::new([&[1, 2, 3], &[4, 5, 6, 7], &[8, 9, 10]]).expect("static sets")
    }

    /// Defender's view of the attacker. `include_nine` adds band 9 to the last
    /// subgame, which the original sets {7, 8, 10} leave out.
    pub fn defender(include_nine: bool) -> Self {
        let last: &[usize] = if include_nine { &[7, 8, 9, 10] } else { &[7, 8, 10] };
        Self::new([&[1, 2, 3], &[4, 5, 6], last]).expect("static sets")
    }

    pub fn counts(&self, k: usize) -> &Dist {
        &self.counts[k]
    }

    pub fn subgame(&self, k: usize) -> &Mask {
        &self.subgames[k]
    }

    pub fn probs(&self) -> &[f64; NUM_SUBGAMES] {
        &self.probs
    }

    pub fn aggregated(&self) -> &Dist {
        &self.aggregated
    }

    /// Column-mixed strategy of subgame `k`, zero outside the subgame.
    pub fn cms(&self, k: usize) -> Dist {
        let mask = &self.subgames[k];
        let total: f64 = (0..NUM_STRATEGIES).filter(|&j| mask[j]).map(|j| self.counts[k][j]).sum();
        let mut row = [0.0; NUM_STRATEGIES];
        for j in 0..NUM_STRATEGIES {
            if mask[j] {
                row[j] = self.counts[k][j] / total;
            }
        }
        row
    }

    /// First restricted subgame containing `s`, if any.
    pub fn subgame_of(&self, s: StrategyIndex) -> Option<usize> {
        (1..NUM_SUBGAMES).find(|&k| self.subgames[k][s.zero_based()])
    }

    /// Counts one observation in subgame `k`; the full game sees every observation.
    pub fn update_counts(&mut self, k: usize, observed: StrategyIndex) {
        self.counts[k][observed.zero_based()] += 1.0;
        if k != 0 {
            self.counts[0][observed.zero_based()] += 1.0;
        }
    }

    /// Counts an observation in the full game and in the subgame holding it.
    pub fn observe(&mut self, observed: StrategyIndex) {
        match self.subgame_of(observed) {
            Some(k) => self.update_counts(k, observed),
            None => self.update_counts(0, observed),
        }
    }

    /// Sets subgame probabilities and recomputes the aggregated mixture.
    pub fn set_probs(&mut self, probs: [f64; NUM_SUBGAMES]) {
        self.probs = probs;
        let mut s = [0.0; NUM_STRATEGIES];
        for (k, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let row = self.cms(k);
            for j in 0..NUM_STRATEGIES {
                s[j] += p * row[j];
            }
        }
        self.aggregated = s;
    }
}

/// Normalizes non-negative weights, falling back to the full game when all are zero.
pub fn normalize_subgame_weights(w: [f64; NUM_SUBGAMES]) -> [f64; NUM_SUBGAMES] {
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.map(|x| x / total)
    } else {
        FULL_GAME
    }
}
