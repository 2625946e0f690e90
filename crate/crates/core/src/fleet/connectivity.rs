use std::collections::VecDeque;

use super::drone::{DroneId, DroneKind, DroneRecord, DroneStatus};
use crate::signal::{Dbm, Position, SignalRangeTable};

/// Drones with a multi-hop route to the leader.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Connectivity {
    /// Reachable drones, leader excluded, ascending ids.
    pub members: Vec<DroneId>,
}

impl Connectivity {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, id: DroneId) -> bool {
        self.members.binary_search(&id).is_ok()
    }
}

fn on_network(d: &DroneRecord) -> bool {
    !matches!(
        d.status,
        DroneStatus::Charging | DroneStatus::Compromised | DroneStatus::Crashed
    )
}

/// Breadth-first search over links `dist <= min(range_a, range_b)`.
pub fn active_connected(fleet: &[DroneRecord], table: &SignalRangeTable) -> Connectivity {
    connected_with(fleet, table, |d| d.tx_power)
}

/// Same search with transmit powers supplied by `tx`.
pub fn connected_with(
    fleet: &[DroneRecord],
    table: &SignalRangeTable,
    tx: impl Fn(&DroneRecord) -> Dbm,
) -> Connectivity {
    let nodes: Vec<(DroneId, bool, Position, f64)> = fleet
        .iter()
        .filter(|d| on_network(d))
        .map(|d| (d.id, d.kind == DroneKind::Leader, d.pos, table.range_radius(tx(d))))
        .collect();
    let Some(root) = nodes.iter().position(|n| n.1) else {
        return Connectivity::default();
    };

    let mut seen = vec![false; nodes.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for v in 0..nodes.len() {
            if seen[v] {
                continue;
            }
            let reach = nodes[u].3.min(nodes[v].3);
            if nodes[u].2.distance_to(&nodes[v].2) <= reach {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    let mut members: Vec<DroneId> = nodes
        .iter()
        .zip(&seen)
        .filter(|(n, &s)| s && !n.1)
        .map(|(n, _)| n.0)
        .collect();
    members.sort_unstable();
    Connectivity { members }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: DroneId, kind: DroneKind, x: f64, tx: f64) -> DroneRecord {
        let mut d = DroneRecord::new(id, kind, Position::new(x, 0.0, 0.0), 1.0, 0.5);
        d.tx_power = Dbm(tx);
        d
    }

    #[test]
    fn tight_cluster_all_connected() {
        let t = crate::signal::build_range_table();
        // level 1 gives a 100 m range
        let fleet: Vec<_> = std::iter::once(node(0, DroneKind::Leader, 0.0, -20.0))
            .chain((1..=5).map(|k| node(k, DroneKind::Mission, 10.0 * k as f64, -20.0)))
            .collect();
        assert_eq!(active_connected(&fleet, &t).members, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn straggler_excluded() {
        let t = crate::signal::build_range_table();
        let fleet = vec![
            node(0, DroneKind::Leader, 0.0, 20.0),
            node(1, DroneKind::Mission, 30.0, 20.0),
            node(2, DroneKind::Mission, 1530.0, 20.0),
        ];
        assert_eq!(active_connected(&fleet, &t).members, vec![1]);
    }

    #[test]
    fn multi_hop_chain() {
        let t = crate::signal::build_range_table();
        let fleet = vec![
            node(0, DroneKind::Leader, 0.0, -20.0),
            node(1, DroneKind::Mission, 90.0, -20.0),
            node(2, DroneKind::Mission, 180.0, -20.0),
        ];
        // 180 m from the leader, only reachable through drone 1
        let c = active_connected(&fleet, &t);
        assert_eq!(c.members, vec![1, 2]);
        let without_relay = vec![fleet[0].clone(), fleet[2].clone()];
        assert_eq!(active_connected(&without_relay, &t).count(), 0);
    }

    #[test]
    fn weaker_end_limits_link() {
        let t = crate::signal::build_range_table();
        let fleet = vec![
            node(0, DroneKind::Leader, 0.0, 20.0),
            node(1, DroneKind::Mission, 150.0, -20.0),
        ];
        assert_eq!(active_connected(&fleet, &t).count(), 0);
    }

    #[test]
    fn charging_and_compromised_drop_out() {
        let t = crate::signal::build_range_table();
        let mut a = node(1, DroneKind::Mission, 10.0, 20.0);
        a.status = DroneStatus::Charging;
        let mut b = node(2, DroneKind::Mission, 20.0, 20.0);
        b.status = DroneStatus::Compromised;
        let mut z = node(3, DroneKind::Mission, 30.0, 20.0);
        z.status = DroneStatus::Zombie;
        let fleet = vec![node(0, DroneKind::Leader, 0.0, 20.0), a, b, z];
        assert_eq!(active_connected(&fleet, &t).members, vec![3]);
    }
}
