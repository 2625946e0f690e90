//! Hypergame reasoning for the attacker and the defender.
//!
//! Each player keeps Dirichlet counts over the opponent's strategies, mixes
//! subgame beliefs into one opponent distribution `S`, and picks the strategy
//! with the highest hypergame expected utility (HEU): a blend of the expected
//! utility under `S` and a worst-case term, weighted by the player's
//! uncertainty `g`.

mod attacker;
mod belief;
mod defender;

pub use attacker::{attacker_subgame_probs, criticality, AttackerHt, AttackerUtilityTerms};
pub use belief::{normalize_subgame_weights, BeliefState, Dist, Mask, FULL_GAME, NUM_SUBGAMES};
pub use defender::{defender_subgame_probs, DefenderHt, DefenderObservation};

use serde::{Deserialize, Serialize};

use crate::signal::{StrategyIndex, NUM_STRATEGIES};

/// The largest strategy index.
pub const SIG_MAX: usize = NUM_STRATEGIES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Attacker,
    Defender,
}

/// `u[own][opponent]`, both zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityMatrix {
    pub values: Vec<Vec<f64>>,
}

impl UtilityMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self { values: (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect() }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, own: usize) -> &[f64] {
        &self.values[own]
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { values: self.values.iter().map(|r| r.iter().map(|v| a * v).collect()).collect() }
    }
}

/// `exp(−λ·ad·counter)`; the defender passes `ad = 1`.
pub fn uncertainty(lambda: f64, ad: f64, counter: u64) -> f64 {
    (-lambda * ad * counter as f64).exp()
}

/// Opponent strategy giving `row` its lowest utility, lowest index on ties.
pub fn worst_case(row: &[f64]) -> usize {
    let mut w = 0;
    for (k, &v) in row.iter().enumerate() {
        if v < row[w] {
            w = k;
        }
    }
    w
}

/// HEU of one own strategy whose utilities against each opponent strategy are `row`.
pub fn heu(row: &[f64], s: &[f64], g: f64) -> f64 {
    let expected: f64 = row.iter().zip(s).map(|(u, p)| u * p).sum();
    let w = worst_case(row);
    let worst = row.len() as f64 * s[w] * row[w];
    (1.0 - g) * expected + g * worst
}

/// Own strategy maximizing HEU, lowest index on ties (zero-based).
pub fn best_response_index(u: &UtilityMatrix, s: &[f64], g: f64) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for own in 0..u.size() {
        let v = heu(u.row(own), s, g);
        if v > best_val {
            best = own;
            best_val = v;
        }
    }
    best
}

pub fn best_response(u: &UtilityMatrix, s: &Dist, g: f64) -> StrategyIndex {
    StrategyIndex::from_zero_based(best_response_index(u, s, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn two_strategy_toy() {
        let u = UtilityMatrix { values: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        let s = [0.5, 0.5];
        assert!((heu(u.row(0), &s, 0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_g() {
        let mut rng = crate::SimRng::seed_from_u64(4);
        let u = UtilityMatrix::from_fn(10, |_, _| rng.random_range(-3.0..3.0));
        let s = [0.1; 10];
        for own in 0..10 {
            let row = u.row(own);
            let eu: f64 = row.iter().zip(&s).map(|(a, b)| a * b).sum();
            assert_eq!(heu(row, &s, 0.0), eu);
            let w = worst_case(row);
            assert_eq!(heu(row, &s, 1.0), 10.0 * s[w] * row[w]);
        }
    }

    #[test]
    fn equal_utilities_pick_first() {
        let u = UtilityMatrix::from_fn(10, |_, _| 0.7);
        assert_eq!(best_response(&u, &[0.1; 10], 0.3).get(), 1);
    }

    #[test]
    fn uncertainty_decays() {
        assert_eq!(uncertainty(1.0, 0.3, 0), 1.0);
        let mut prev = 1.0;
        for n in 1..50 {
            let g = uncertainty(1.0, 0.3, n);
            assert!(g <= prev && g > 0.0);
            prev = g;
        }
    }

    proptest! {
        #[test]
        fn linear_in_g(row in prop::array::uniform10(-5.0f64..5.0), g in 0.0f64..=1.0) {
            let s = [0.05, 0.15, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];
            let lhs = heu(&row, &s, g);
            let rhs = (1.0 - g) * heu(&row, &s, 0.0) + g * heu(&row, &s, 1.0);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
