//! Defense and attack schemes, the players behind them, and post-attack mitigation.

mod agents;
mod mitigation;
mod scheme;

pub use agents::{AttackerAgent, DefenderAgent};
pub use mitigation::{mitigate, Mitigation};
pub use scheme::{AttackKind, DefenseKind, FleetMode, Selector};
