use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fleet::{AttackOutcome, DroneRecord};
use crate::SimRng;

/// What the defense does to a would-be compromise after the attack lands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mitigation {
    /// Honey drones soak up attacks on themselves; mission drones are on their own.
    HoneyAbsorb,
    /// Intrusion detection cancels each compromise with this probability.
    Ids { detect_prob: f64 },
    /// Container defense: the drone keeps flying as a zombie that relays but never scans.
    Container,
    None,
}

/// Applies the defense to a raw attack outcome.
pub fn mitigate(
    mitigation: &Mitigation,
    mut outcome: AttackOutcome,
    _fleet: &[DroneRecord],
    rng: &mut SimRng,
) -> AttackOutcome {
    match *mitigation {
        Mitigation::HoneyAbsorb | Mitigation::None => {}
        Mitigation::Ids { detect_prob } => {
            let (blocked, through): (Vec<_>, Vec<_>) = outcome
                .compromised
                .iter()
                .partition(|_| rng.random::<f64>() < detect_prob);
            outcome.blocked = blocked;
            outcome.compromised = through;
        }
        Mitigation::Container => {
            outcome.zombified = std::mem::take(&mut outcome.compromised);
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn raw(n: u32) -> AttackOutcome {
        AttackOutcome { compromised: (1..=n).collect(), targets: (1..=n).collect(), ..Default::default() }
    }

    #[test]
    fn container_converts_everything() {
        let mut rng = SimRng::seed_from_u64(0);
        let out = mitigate(&Mitigation::Container, raw(3), &[], &mut rng);
        assert!(out.compromised.is_empty());
        assert_eq!(out.zombified, vec![1, 2, 3]);
    }

    #[test]
    fn ids_extremes() {
        let mut rng = SimRng::seed_from_u64(0);
        let all = mitigate(&Mitigation::Ids { detect_prob: 1.0 }, raw(4), &[], &mut rng);
        assert_eq!((all.blocked.len(), all.compromised.len()), (4, 0));
        let none = mitigate(&Mitigation::Ids { detect_prob: 0.0 }, raw(4), &[], &mut rng);
        assert_eq!((none.blocked.len(), none.compromised.len()), (0, 4));
    }

    #[test]
    fn ids_block_rate() {
        let mut rng = SimRng::seed_from_u64(9);
        let mut blocked = 0;
        for _ in 0..2000 {
            blocked += mitigate(&Mitigation::Ids { detect_prob: 0.8 }, raw(5), &[], &mut rng).blocked.len();
        }
        let rate = blocked as f64 / 10_000.0;
        assert!((rate - 0.8).abs() < 0.02, "{rate}");
    }

    #[test]
    fn honey_absorb_is_identity() {
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(mitigate(&Mitigation::HoneyAbsorb, raw(2), &[], &mut rng), raw(2));
    }
}
