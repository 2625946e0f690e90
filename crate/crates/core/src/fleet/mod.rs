//! Drone fleet simulation: grid, planner, deployment, attack, energy, links.

pub mod attack;
pub mod connectivity;
pub mod deploy;
pub mod drone;
pub mod energy;
pub mod grid;
pub mod params;
pub mod planner;
pub mod world;

pub use attack::{resolve_attack, AttackOutcome, AttackerView, Sighting};
pub use connectivity::{active_connected, connected_with, Connectivity};
pub use deploy::{deploy_honey_drones, DeployParams, HdPlacement};
pub use drone::{DroneId, DroneKind, DroneRecord, DroneStatus};
pub use energy::{consume_energy, round_draw};
pub use grid::GridMap;
pub use params::{EnergyParams, MdSignalRule, ScenarioParams};
pub use planner::plan_trajectories;
pub use world::{AttackPolicy, RoundReport, World, LEADER_ID};
