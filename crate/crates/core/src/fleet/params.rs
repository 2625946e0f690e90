use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Position;

/// Per-round power draw and battery model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyParams {
    /// Platform draw in mW (motors, SoC).
    pub platform_mw: f64,
    /// Camera draw in mW, mission drones only.
    pub camera_mw: f64,
    /// Radio draw at the strongest level, in mW.
    pub radio_mw: f64,
    /// Full battery, in mW·rounds.
    pub capacity: f64,
    /// A drone leaves for charging below `threshold_frac · capacity`.
    pub threshold_frac: f64,
    /// Rounds spent at the charging station.
    pub charge_rounds: u32,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            platform_mw: 7900.0,
            camera_mw: 4.0,
            radio_mw: 100.0,
            capacity: 1_000_000.0,
            threshold_frac: 0.10,
            charge_rounds: 30,
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("platform_mw", self.platform_mw),
            ("camera_mw", self.camera_mw),
            ("radio_mw", self.radio_mw),
            ("capacity", self.capacity),
            ("threshold_frac", self.threshold_frac),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("energy.{name} must be positive, got {v}")));
            }
        }
        if self.threshold_frac >= 1.0 {
            return Err(Error::Config("energy.threshold_frac must be < 1".into()));
        }
        if self.charge_rounds == 0 {
            return Err(Error::Config("energy.charge_rounds must be positive".into()));
        }
        Ok(())
    }
}

/// How a mission drone's transmit power follows the honey-drone level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MdSignalRule {
    /// `sg_MD = sg_HD − ρ` in dBm.
    #[default]
    DbmOffset,
    /// `sg_MD = level[j − ρ]`, clamped at level 1.
    IndexOffset,
}

/// Mission world geometry, fleet composition and threat parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub grid_width: usize,
    pub grid_height: usize,
    pub cell_size: f64,
    pub scan_units_per_cell: u32,
    /// Flight altitude of mission, honey and leader drones.
    pub altitude: f64,
    pub num_mds: usize,
    pub num_hds: usize,
    /// Replacement mission drones waiting at the ground station.
    pub spare_mds: usize,
    pub energy: EnergyParams,
    pub tau_lower: usize,
    pub tau_upper: usize,
    pub rho: f64,
    pub md_signal_rule: MdSignalRule,
    /// Attack budget: drones targeted per round at most.
    pub zeta: usize,
    /// Attacker position; `None` means `attacker_offset` meters south of the
    /// midpoint of the area's southern edge, on the ground.
    pub attacker_position: Option<Position>,
    pub attacker_offset: f64,
    pub vul_min: f64,
    pub vul_max: f64,
    /// Probability that a honey drone raises an alert when attacked.
    pub hd_detect_prob: f64,
    pub max_rounds: u32,
    /// Scan progress only counts while the drone has a route to the leader.
    pub require_link_for_scan: bool,
    /// End the mission as soon as no mission drone can ever scan again,
    /// instead of idling until `max_rounds`.
    pub stop_on_fleet_loss: bool,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            grid_width: 5,
            grid_height: 5,
            cell_size: 150.0,
            scan_units_per_cell: 1,
            altitude: 30.0,
            num_mds: 15,
            num_hds: 5,
            spare_mds: 0,
            energy: EnergyParams::default(),
            tau_lower: 2,
            tau_upper: 4,
            rho: 5.0,
            md_signal_rule: MdSignalRule::DbmOffset,
            zeta: 5,
            attacker_position: None,
            attacker_offset: 200.0,
            vul_min: 0.3,
            vul_max: 0.9,
            hd_detect_prob: 1.0,
            max_rounds: 150,
            require_link_for_scan: false,
            stop_on_fleet_loss: false,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        if self.grid_width == 0 || self.grid_height == 0 {
            return Err(Error::Config("grid dimensions must be positive".into()));
        }
        if !(self.cell_size > 0.0) {
            return Err(Error::Config("cell_size must be positive".into()));
        }
        if self.scan_units_per_cell == 0 {
            return Err(Error::Config("scan_units_per_cell must be >= 1".into()));
        }
        if !(self.altitude >= 0.0) {
            return Err(Error::Config("altitude must be >= 0".into()));
        }
        if self.num_mds == 0 {
            return Err(Error::Config("num_mds must be >= 1".into()));
        }
        if self.tau_lower > self.tau_upper || self.tau_upper == 0 {
            return Err(Error::Config(format!(
                "need 0 <= tau_lower <= tau_upper, tau_upper >= 1; got [{}, {}]",
                self.tau_lower, self.tau_upper
            )));
        }
        if self.zeta == 0 {
            return Err(Error::Config("zeta must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.vul_min)
            || !(0.0..=1.0).contains(&self.vul_max)
            || self.vul_min > self.vul_max
        {
            return Err(Error::Config("need 0 <= vul_min <= vul_max <= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.hd_detect_prob) {
            return Err(Error::Config("hd_detect_prob must lie in [0, 1]".into()));
        }
        if self.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be >= 1".into()));
        }
        if !self.rho.is_finite() || self.rho < 0.0 {
            return Err(Error::Config("rho must be finite and >= 0".into()));
        }
        self.energy.validate()
    }

    pub fn num_cells(&self) -> usize {
        self.grid_width * self.grid_height
    }

    pub fn area_width(&self) -> f64 {
        self.grid_width as f64 * self.cell_size
    }

    pub fn area_height(&self) -> f64 {
        self.grid_height as f64 * self.cell_size
    }

    pub fn attacker_pos(&self) -> Position {
        self.attacker_position
            .unwrap_or_else(|| Position::new(self.area_width() / 2.0, -self.attacker_offset, 0.0))
    }

    /// Leader drone hovers over the middle of the area.
    pub fn leader_pos(&self) -> Position {
        Position::new(self.area_width() / 2.0, self.area_height() / 2.0, self.altitude)
    }
}
