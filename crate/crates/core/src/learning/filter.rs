use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::NUM_STRATEGIES;

/// Where the filter weights act on the policy head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// Multiply softmax probabilities, then renormalize.
    #[default]
    Probability,
    /// Multiply logits before the softmax.
    Logit,
}

/// Fixed per-action weights taken from a hypergame agent's action frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApdFilter {
    pub weights: [f64; NUM_STRATEGIES],
    /// Lower bound applied to every weight.
    pub floor: f64,
}

impl ApdFilter {
    pub fn new(weights: [f64; NUM_STRATEGIES], floor: f64) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || !(floor >= 0.0) {
            return Err(Error::Config("filter weights must be finite and non-negative".into()));
        }
        if weights.iter().copied().fold(0.0, f64::max).max(floor) <= 0.0 {
            return Err(Error::Config("filter needs a positive weight".into()));
        }
        Ok(Self { weights, floor })
    }

    pub fn uniform(floor: f64) -> Self {
        Self { weights: [1.0 / NUM_STRATEGIES as f64; NUM_STRATEGIES], floor }
    }

    /// Laplace-smoothed choice frequencies.
    pub fn from_choices(counts: &[u64; NUM_STRATEGIES], floor: f64) -> Self {
        let n: u64 = counts.iter().sum();
        let denom = n as f64 + NUM_STRATEGIES as f64;
        Self { weights: counts.map(|c| (c as f64 + 1.0) / denom), floor }
    }

    /// Weights after flooring.
    pub fn effective(&self) -> [f64; NUM_STRATEGIES] {
        self.weights.map(|w| w.max(self.floor))
    }
}

/// Multiplies `probs` by the floored weights and renormalizes.
pub fn apply_filter(probs: &[f64], filter: &ApdFilter) -> Vec<f64> {
    let w = filter.effective();
    let mut out: Vec<f64> = probs.iter().zip(w).map(|(p, w)| p * w).collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

/// Inverse-CDF draw: first index whose cumulative probability exceeds `u`.
pub fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last = k;
        }
        acc += p;
        if u < acc {
            return k;
        }
    }
    last
}

pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for k in 1..v.len() {
        if v[k] > v[best] {
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_hot_with_floor() {
        let mut w = [0.0; 10];
        w[6] = 1.0;
        let f = ApdFilter::new(w, 1e-3).unwrap();
        let out = apply_filter(&[0.1; 10], &f);
        let norm = 1.0 + 9.0 * 1e-3;
        assert!((out[6] - 1.0 / norm).abs() < 1e-15);
        for (k, v) in out.iter().enumerate() {
            if k != 6 {
                assert!((v - 1e-3 / norm).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn uniform_input_follows_weights() {
        let w = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        let out = apply_filter(&[0.1; 10], &ApdFilter::new(w, 0.0).unwrap());
        for k in 0..10 {
            assert!((out[k] - w[k] / 55.0).abs() < 1e-15);
        }
    }

    #[test]
    fn laplace_weights() {
        let f = ApdFilter::from_choices(&[0, 0, 0, 0, 20, 0, 0, 0, 0, 0], 1e-3);
        assert!((f.weights[4] - 21.0 / 30.0).abs() < 1e-15);
        assert!((f.weights[0] - 1.0 / 30.0).abs() < 1e-15);
        assert_eq!(ApdFilter::from_choices(&[0; 10], 1e-3).weights, [0.1; 10]);
        let f = ApdFilter::from_choices(&[10, 10, 20, 0, 0, 0, 0, 0, 0, 0], 0.0);
        assert!((f.weights[2] / f.weights[0] - 21.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_cdf_walk() {
        let p = [0.2, 0.0, 0.5, 0.3];
        assert_eq!(sample_index(&p, 0.0), 0);
        assert_eq!(sample_index(&p, 0.19), 0);
        assert_eq!(sample_index(&p, 0.2), 2);
        assert_eq!(sample_index(&p, 0.69), 2);
        assert_eq!(sample_index(&p, 0.7), 3);
        assert_eq!(sample_index(&p, 0.9999999), 3);
    }

    #[test]
    fn all_zero_weights_rejected() {
        assert!(ApdFilter::new([0.0; 10], 0.0).is_err());
    }

    proptest! {
        #[test]
        fn uniform_filter_is_identity(raw in prop::array::uniform10(0.01f64..1.0)) {
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let out = apply_filter(&p, &ApdFilter::uniform(1e-3));
            for (a, b) in out.iter().zip(&p) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
