//! Agent state vectors and per-round rewards.

use crate::fleet::{AttackerView, RoundReport, World};
use crate::signal::NUM_STRATEGIES;

pub const ATTACKER_STATE_DIM: usize = NUM_STRATEGIES;

/// Drone counts per received-signal band at the attacker.
pub fn attacker_state(view: &AttackerView) -> Vec<f64> {
    view.band_counts().iter().map(|&n| n as f64).collect()
}

/// Completion ratio followed by per-cell scan progress.
pub fn defender_state(world: &World) -> Vec<f64> {
    std::iter::once(world.completion_ratio()).chain(world.grid().progress_map()).collect()
}

pub fn defender_state_dim(num_cells: usize) -> usize {
    1 + num_cells
}

/// Tasks the attacker kept from completing this round.
pub fn attacker_reward(report: &RoundReport) -> f64 {
    report.tasks_not_completed() as f64
}

/// Tasks completed this round.
pub fn defender_reward(report: &RoundReport) -> f64 {
    report.tasks_completed as f64
}
