use super::drone::{DroneKind, DroneRecord, DroneStatus};
use super::params::EnergyParams;
use crate::signal::SignalRangeTable;

/// Per-round draw of one airborne drone at its current transmit level.
pub fn round_draw(d: &DroneRecord, table: &SignalRangeTable, p: &EnergyParams) -> f64 {
    let level = table.level_at_or_below(d.tx_power).get() as f64;
    let radio = p.radio_mw * level / 10.0;
    match d.kind {
        DroneKind::Mission => p.platform_mw + p.camera_mw + radio,
        DroneKind::Honey => p.platform_mw + radio,
        DroneKind::Leader => 0.0,
    }
}

/// Drains airborne drones, sends low ones to charge and returns charged ones.
///
/// Drones already charging at the start of the call tick their timer and come
/// back full when it runs out. Returns the energy spent this round.
pub fn consume_energy(fleet: &mut [DroneRecord], table: &SignalRangeTable, p: &EnergyParams) -> f64 {
    let threshold = p.threshold_frac * p.capacity;
    let mut spent = 0.0;
    for d in fleet.iter_mut() {
        match d.status {
            DroneStatus::Charging => {
                d.charge_timer = d.charge_timer.saturating_sub(1);
                if d.charge_timer == 0 {
                    d.battery = p.capacity;
                    d.status = if d.contained { DroneStatus::Zombie } else { DroneStatus::Active };
                }
            }
            DroneStatus::Active | DroneStatus::Zombie if d.kind != DroneKind::Leader => {
                let draw = round_draw(d, table, p).min(d.battery);
                d.battery -= draw;
                spent += draw;
                if d.battery <= 0.0 {
                    d.battery = 0.0;
                    d.status = DroneStatus::Crashed;
                } else if d.battery < threshold {
                    d.status = DroneStatus::Charging;
                    d.charge_timer = p.charge_rounds;
                    d.assigned_cell = None;
                }
            }
            _ => {}
        }
    }
    spent
}
