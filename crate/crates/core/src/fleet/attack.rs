//! What the ground attacker sees and what a DoS round does to the fleet.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::drone::{DroneId, DroneKind, DroneRecord};
use crate::signal::{Dbm, Position, SignalRangeTable, StrategyIndex, NUM_STRATEGIES};
use crate::SimRng;

/// One drone as heard from the attacker's antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sighting {
    pub id: DroneId,
    pub received: Dbm,
    pub band: StrategyIndex,
}

/// Everything the attacker can observe at the start of its move.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackerView {
    pub round: u32,
    pub zeta: usize,
    /// Audible drones, strongest first (ties by id).
    pub sightings: Vec<Sighting>,
}

impl AttackerView {
    /// Airborne, non-leader drones whose signal clears the noise floor.
    pub fn observe(
        fleet: &[DroneRecord],
        attacker: &Position,
        table: &SignalRangeTable,
        zeta: usize,
        round: u32,
    ) -> Self {
        let mut sightings: Vec<Sighting> = fleet
            .iter()
            .filter(|d| d.kind != DroneKind::Leader && d.is_airborne())
            .filter_map(|d| {
                let dist = d.pos.distance_to(attacker).max(table.ref_distance());
                let received = table.received_power(d.tx_power, dist).ok()?;
                let band = table.classify_received(received)?;
                Some(Sighting { id: d.id, received, band })
            })
            .collect();
        sightings.sort_by(|a, b| b.received.0.total_cmp(&a.received.0).then(a.id.cmp(&b.id)));
        Self { round, zeta, sightings }
    }

    /// Drone counts per band, `N_TR`.
    pub fn band_counts(&self) -> [usize; NUM_STRATEGIES] {
        let mut counts = [0; NUM_STRATEGIES];
        for s in &self.sightings {
            counts[s.band.zero_based()] += 1;
        }
        counts
    }

    /// Drones the attacker would hit with band `i`: at most `zeta`, strongest first.
    pub fn targets(&self, i: StrategyIndex) -> impl Iterator<Item = &Sighting> + '_ {
        self.sightings.iter().filter(move |s| s.band == i).take(self.zeta)
    }

    pub fn strongest(&self) -> Option<&Sighting> {
        self.sightings.first()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub strategy: Option<StrategyIndex>,
    pub targets: Vec<DroneId>,
    /// Mission drones taken down this round, after mitigation.
    pub compromised: Vec<DroneId>,
    /// Honey-drone detections.
    pub alerts: usize,
    /// Would-be compromises turned into zombies by container defense.
    pub zombified: Vec<DroneId>,
    /// Would-be compromises stopped by intrusion detection.
    pub blocked: Vec<DroneId>,
}

/// Resolves one DoS round against the fleet.
///
/// Targets are the strongest `zeta` drones heard in band `strategy`. Honey
/// drones raise an alert with probability `hd_detect_prob` and are never
/// compromised; a targeted mission drone falls with probability `vul`.
pub fn resolve_attack(
    strategy: StrategyIndex,
    view: &AttackerView,
    fleet: &[DroneRecord],
    hd_detect_prob: f64,
    rng: &mut SimRng,
) -> AttackOutcome {
    let mut out = AttackOutcome { strategy: Some(strategy), ..Default::default() };
    for s in view.targets(strategy) {
        let Some(drone) = fleet.iter().find(|d| d.id == s.id) else { continue };
        out.targets.push(s.id);
        match drone.kind {
            DroneKind::Honey => {
                if hd_detect_prob >= 1.0 || rng.random::<f64>() < hd_detect_prob {
                    out.alerts += 1;
                }
            }
            DroneKind::Mission => {
                if rng.random::<f64>() < drone.vul {
                    out.compromised.push(s.id);
                }
            }
            DroneKind::Leader => {}
        }
    }
    out
}
