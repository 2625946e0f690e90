//! The mission world and its fixed-order round loop.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::attack::{resolve_attack, AttackOutcome, AttackerView};
use super::connectivity::{active_connected, connected_with};
use super::deploy::{deploy_honey_drones, DeployParams};
use super::drone::{DroneId, DroneKind, DroneRecord, DroneStatus};
use super::energy::consume_energy;
use super::grid::GridMap;
use super::params::{MdSignalRule, ScenarioParams};
use super::planner::plan_trajectories;
use crate::defenses::{mitigate, Mitigation};
use crate::error::{Error, Result};
use crate::signal::{Dbm, Position, SignalRangeTable, StrategyIndex, MAX_TX_DBM};
use crate::SimRng;

/// Anything that picks an attack band from the attacker's observation.
pub trait AttackPolicy {
    fn select(&mut self, view: &AttackerView) -> StrategyIndex;
}

impl<F: FnMut(&AttackerView) -> StrategyIndex> AttackPolicy for F {
    fn select(&mut self, view: &AttackerView) -> StrategyIndex {
        self(view)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundReport {
    pub t: u32,
    pub tasks_completed: usize,
    pub tasks_outstanding_at_start: usize,
    pub n_active_connected: usize,
    pub energy_spent: f64,
    pub attack: AttackOutcome,
    pub defense: StrategyIndex,
    /// What the attacker saw before choosing.
    pub attacker_view: AttackerView,
    pub terminal: bool,
}

impl RoundReport {
    /// Tasks still open after this round's scanning.
    pub fn tasks_not_completed(&self) -> usize {
        self.tasks_outstanding_at_start - self.tasks_completed
    }
}

pub const LEADER_ID: DroneId = 0;

#[derive(Debug, Clone)]
pub struct World {
    params: ScenarioParams,
    table: SignalRangeTable,
    mitigation: Mitigation,
    grid: GridMap,
    fleet: Vec<DroneRecord>,
    attacker_pos: Position,
    start_pos: Position,
    round: u32,
    terminated: bool,
    spares_left: usize,
    next_id: DroneId,
    total_compromised: usize,
    rng: SimRng,
}

impl World {
    /// Fresh mission: full batteries, fleet parked over the middle cell.
    pub fn new(
        params: ScenarioParams,
        table: SignalRangeTable,
        mitigation: Mitigation,
        rng: SimRng,
    ) -> Result<Self> {
        params.validate()?;
        let grid = GridMap::new(
            params.grid_width,
            params.grid_height,
            params.cell_size,
            params.scan_units_per_cell,
        );
        Self::with_grid(params, table, mitigation, grid, rng)
    }

    /// Like [`World::new`] with a pre-built scan map.
    pub fn with_grid(
        params: ScenarioParams,
        table: SignalRangeTable,
        mitigation: Mitigation,
        grid: GridMap,
        mut rng: SimRng,
    ) -> Result<Self> {
        params.validate()?;
        if grid.num_cells() != params.num_cells() {
            return Err(Error::Config("grid does not match scenario dimensions".into()));
        }
        let leader_pos = params.leader_pos();
        let start_cell = grid.cell_of(&leader_pos);
        let start_pos = grid.center(start_cell, params.altitude);
        let cap = params.energy.capacity;

        let mut leader = DroneRecord::new(LEADER_ID, DroneKind::Leader, leader_pos, cap, 0.0);
        leader.tx_power = Dbm(MAX_TX_DBM);
        let mut fleet = vec![leader];
        let mut next_id = 1;
        for _ in 0..params.num_mds {
            let vul = rng.random_range(params.vul_min..=params.vul_max);
            fleet.push(DroneRecord::new(next_id, DroneKind::Mission, start_pos, cap, vul));
            next_id += 1;
        }
        for _ in 0..params.num_hds {
            fleet.push(DroneRecord::new(next_id, DroneKind::Honey, start_pos, cap, 0.0));
            next_id += 1;
        }
        let terminated = grid.all_complete();
        Ok(Self {
            attacker_pos: params.attacker_pos(),
            spares_left: params.spare_mds,
            params,
            table,
            mitigation,
            grid,
            fleet,
            start_pos,
            round: 0,
            terminated,
            next_id,
            total_compromised: 0,
            rng,
        })
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.params
    }

    pub fn table(&self) -> &SignalRangeTable {
        &self.table
    }

    pub fn grid(&self) -> &GridMap {
        &self.grid
    }

    pub fn fleet(&self) -> &[DroneRecord] {
        &self.fleet
    }

    /// Mutable fleet access for scenario set-up.
    pub fn fleet_mut(&mut self) -> &mut [DroneRecord] {
        &mut self.fleet
    }

    pub fn attacker_pos(&self) -> Position {
        self.attacker_pos
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn total_compromised(&self) -> usize {
        self.total_compromised
    }

    /// Completed cells over all cells.
    pub fn completion_ratio(&self) -> f64 {
        self.grid.completed_cells() as f64 / self.grid.num_cells() as f64
    }

    /// Mission and honey drones initially assigned to the mission team.
    pub fn initial_team_size(&self) -> usize {
        self.params.num_mds + self.params.num_hds
    }

    /// Transmit power of a mission drone when honey drones use level `j`.
    pub fn md_tx(&self, j: StrategyIndex) -> Dbm {
        match self.params.md_signal_rule {
            MdSignalRule::DbmOffset => Dbm(self.table.defender_level(j).0 - self.params.rho),
            MdSignalRule::IndexOffset => {
                let k = (j.get() as i64 - self.params.rho.round() as i64).max(1);
                self.table.defender_level(StrategyIndex::new(k).expect("clamped to 1..=10"))
            }
        }
    }

    fn tx_for(&self, d: &DroneRecord, j: StrategyIndex) -> Dbm {
        match d.kind {
            DroneKind::Leader => Dbm(MAX_TX_DBM),
            DroneKind::Honey => self.table.defender_level(j),
            DroneKind::Mission => self.md_tx(j),
        }
    }

    /// Connected drone count if every drone switched to level `j` where it stands.
    pub fn connected_if(&self, j: StrategyIndex) -> usize {
        connected_with(&self.fleet, &self.table, |d| self.tx_for(d, j)).count()
    }

    /// No mission drone can scan again: all lost or contained, none charging, no spares.
    pub fn fleet_lost(&self) -> bool {
        self.spares_left == 0
            && !self.fleet.iter().any(|d| {
                d.kind == DroneKind::Mission
                    && match d.status {
                        DroneStatus::Active => true,
                        DroneStatus::Charging => !d.contained,
                        _ => false,
                    }
            })
    }

    /// Plays one round in fixed phase order: signal levels, honey-drone
    /// deployment, movement and scanning, attack, energy, connectivity.
    pub fn step_round(
        &mut self,
        defense: StrategyIndex,
        attacker: &mut dyn AttackPolicy,
    ) -> Result<RoundReport> {
        if self.terminated {
            return Err(Error::Terminated(self.round));
        }
        let t = self.round;
        let outstanding = self.grid.num_cells() - self.grid.completed_cells();

        // 1. signal levels
        for k in 0..self.fleet.len() {
            let tx = self.tx_for(&self.fleet[k], defense);
            self.fleet[k].tx_power = tx;
        }

        // 2. honey-drone deployment
        self.deploy();

        // 3. movement and scanning
        let tasks_completed = self.move_and_scan();

        // 4. attack
        let view = AttackerView::observe(&self.fleet, &self.attacker_pos, &self.table, self.params.zeta, t);
        let strategy = attacker.select(&view);
        let raw = resolve_attack(strategy, &view, &self.fleet, self.params.hd_detect_prob, &mut self.rng);
        let attack = mitigate(&self.mitigation, raw, &self.fleet, &mut self.rng);
        self.apply_attack(&attack);

        // 5. energy
        let energy_spent = consume_energy(&mut self.fleet, &self.table, &self.params.energy);
        self.replace_lost();

        // 6. connectivity
        let n_active_connected = active_connected(&self.fleet, &self.table).count();

        self.round += 1;
        self.terminated = self.grid.all_complete()
            || self.round >= self.params.max_rounds
            || (self.params.stop_on_fleet_loss && self.fleet_lost());

        Ok(RoundReport {
            t,
            tasks_completed,
            tasks_outstanding_at_start: outstanding,
            n_active_connected,
            energy_spent,
            attack,
            defense,
            attacker_view: view,
            terminal: self.terminated,
        })
    }

    fn deploy(&mut self) {
        let hds: Vec<(DroneId, Position)> = self
            .fleet
            .iter()
            .filter(|d| d.kind == DroneKind::Honey && d.status == DroneStatus::Active)
            .map(|d| (d.id, d.pos))
            .collect();
        if hds.is_empty() {
            return;
        }
        let mds: Vec<(DroneId, Position)> = self
            .fleet
            .iter()
            .filter(|d| d.is_productive_md())
            .map(|d| (d.id, d.pos))
            .collect();
        let params = DeployParams {
            radius: self.table.range_radius(self.table.defender_level(StrategyIndex::new(5).unwrap())),
            tau_lower: self.params.tau_lower,
            tau_upper: self.params.tau_upper,
        };
        for placement in deploy_honey_drones(&hds, &mds, params) {
            if let Some(d) = self.fleet.iter_mut().find(|d| d.id == placement.hd) {
                d.pos = Position { z: self.params.altitude, ..placement.position };
            }
        }
    }

    fn move_and_scan(&mut self) -> usize {
        let movers: Vec<usize> = (0..self.fleet.len()).filter(|&k| self.fleet[k].is_productive_md()).collect();
        let starts: Vec<usize> = movers.iter().map(|&k| self.grid.cell_of(&self.fleet[k].pos)).collect();
        let plans = plan_trajectories(&self.grid, &starts);
        for ((&k, &from), plan) in movers.iter().zip(&starts).zip(&plans) {
            let d = &mut self.fleet[k];
            d.assigned_cell = plan.first().copied();
            if let Some(&target) = plan.first() {
                let next = self.grid.step_toward(from, target);
                d.pos = self.grid.center(next, self.params.altitude);
            }
        }

        let linked = self.params.require_link_for_scan.then(|| active_connected(&self.fleet, &self.table));
        let mut completed = 0;
        for &k in &movers {
            let d = &self.fleet[k];
            let Some(target) = d.assigned_cell else { continue };
            if self.grid.cell_of(&d.pos) != target {
                continue;
            }
            if linked.as_ref().is_some_and(|c| !c.contains(d.id)) {
                continue;
            }
            if self.grid.scan(target) {
                completed += 1;
            }
        }
        completed
    }

    fn apply_attack(&mut self, attack: &AttackOutcome) {
        for d in self.fleet.iter_mut() {
            if attack.compromised.contains(&d.id) {
                d.status = DroneStatus::Compromised;
                d.assigned_cell = None;
                self.total_compromised += 1;
            } else if attack.zombified.contains(&d.id) {
                d.status = DroneStatus::Zombie;
                d.contained = true;
                d.assigned_cell = None;
            }
        }
    }

    fn replace_lost(&mut self) {
        let lost = self
            .fleet
            .iter()
            .filter(|d| d.kind == DroneKind::Mission && d.is_lost())
            .count();
        let replaced = self.params.spare_mds - self.spares_left;
        let mut needed = lost.saturating_sub(replaced).min(self.spares_left);
        while needed > 0 {
            let vul = self.rng.random_range(self.params.vul_min..=self.params.vul_max);
            let id = self.next_id;
            self.next_id += 1;
            self.fleet
                .push(DroneRecord::new(id, DroneKind::Mission, self.start_pos, self.params.energy.capacity, vul));
            self.spares_left -= 1;
            needed -= 1;
        }
    }
}
