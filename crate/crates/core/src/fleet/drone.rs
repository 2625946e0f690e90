use serde::{Deserialize, Serialize};

use crate::signal::{Dbm, Position};

pub type DroneId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DroneKind {
    /// Mission drone: scans cells, can be compromised.
    Mission,
    /// Honey drone: decoy that absorbs attacks and raises alerts.
    Honey,
    /// Regional leader drone: collects scan data, never attacked.
    Leader,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DroneStatus {
    Active,
    Charging,
    Compromised,
    Crashed,
    /// Contained by a container-style defense: flies and relays but does no scanning.
    Zombie,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroneRecord {
    pub id: DroneId,
    pub kind: DroneKind,
    pub pos: Position,
    pub battery: f64,
    pub vul: f64,
    pub status: DroneStatus,
    pub tx_power: Dbm,
    pub assigned_cell: Option<usize>,
    pub charge_timer: u32,
    /// Returns as a zombie after charging.
    pub contained: bool,
}

impl DroneRecord {
    pub fn new(id: DroneId, kind: DroneKind, pos: Position, battery: f64, vul: f64) -> Self {
        Self {
            id,
            kind,
            pos,
            battery,
            vul,
            status: DroneStatus::Active,
            tx_power: Dbm(0.0),
            assigned_cell: None,
            charge_timer: 0,
            contained: false,
        }
    }

    /// In the air and on the network: active, zombie, or the leader.
    pub fn is_airborne(&self) -> bool {
        matches!(self.status, DroneStatus::Active | DroneStatus::Zombie)
    }

    pub fn is_lost(&self) -> bool {
        matches!(self.status, DroneStatus::Compromised | DroneStatus::Crashed)
    }

    /// Mission drone that can scan right now.
    pub fn is_productive_md(&self) -> bool {
        self.kind == DroneKind::Mission && self.status == DroneStatus::Active
    }
}
