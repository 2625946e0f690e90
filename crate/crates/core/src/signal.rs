//! Distances, log-distance path loss and the two ten-entry signal tables.
//!
//! Attackers pick a band of *received* power, defenders pick a *transmit*
//! level for their honey drones. Both tables are derived from the same
//! log-distance model by splitting the 100..1000 m control range evenly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of strategies available to either player.
pub const NUM_STRATEGIES: usize = 10;

/// Received power at or below this value is not detectable.
pub const NOISE_FLOOR_DBM: f64 = -100.0;

/// Maximum transmit power of a drone radio.
pub const MAX_TX_DBM: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        distance(self, other)
    }
}

/// Euclidean distance between two points in meters.
pub fn distance(a: &Position, b: &Position) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Power in decibel-milliwatts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct Dbm(pub f64);

impl Dbm {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A 1-based strategy index naming an attacker band `AS_i` or defender level `DS_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct StrategyIndex(u8);

impl StrategyIndex {
    pub const MIN: StrategyIndex = StrategyIndex(1);
    pub const MAX: StrategyIndex = StrategyIndex(NUM_STRATEGIES as u8);

    pub fn new(index: i64) -> Result<Self> {
        if (1..=NUM_STRATEGIES as i64).contains(&index) {
            Ok(Self(index as u8))
        } else {
            Err(Error::InvalidStrategy(index))
        }
    }

    /// Builds an index from a 0-based position. Panics when `pos >= 10`.
    pub fn from_zero_based(pos: usize) -> Self {
        assert!(pos < NUM_STRATEGIES, "strategy position {pos} out of range");
        Self(pos as u8 + 1)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn zero_based(self) -> usize {
        self.0 as usize - 1
    }

    pub fn all() -> impl Iterator<Item = StrategyIndex> {
        (0..NUM_STRATEGIES).map(StrategyIndex::from_zero_based)
    }
}

impl TryFrom<u8> for StrategyIndex {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        StrategyIndex::new(value as i64)
    }
}

impl From<StrategyIndex> for u8 {
    fn from(s: StrategyIndex) -> u8 {
        s.0
    }
}

impl std::fmt::Display for StrategyIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Attacker received-power bands and defender transmit levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalRangeTable {
    /// Eleven ascending boundaries; band `i` is `(bounds[i-1], bounds[i]]`.
    attacker_bounds: [f64; NUM_STRATEGIES + 1],
    defender_levels: [f64; NUM_STRATEGIES],
    eta: f64,
    ref_power: f64,
    ref_distance: f64,
}

impl Default for SignalRangeTable {
    fn default() -> Self {
        build_range_table()
    }
}

/// Builds the table with path-loss exponent 4, 20 dBm at 1 m.
pub fn build_range_table() -> SignalRangeTable {
    SignalRangeTable::with_params(4.0, MAX_TX_DBM, 1.0)
        .expect("default path-loss parameters are valid")
}

impl SignalRangeTable {
    /// Builds the table for a custom path-loss model.
    ///
    /// Defender level `k` is the transmit power whose detection radius is
    /// `100·k` meters. Attacker boundaries are the received power of a
    /// `ref_power` transmitter at 900, 800, ..., 100 m.
    pub fn with_params(eta: f64, ref_power: f64, ref_distance: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Config(format!("path-loss exponent must be > 0, got {eta}")));
        }
        if !(ref_distance > 0.0 && ref_distance.is_finite()) {
            return Err(Error::Config(format!("reference distance must be > 0, got {ref_distance}")));
        }
        if !ref_power.is_finite() {
            return Err(Error::Config("reference power must be finite".into()));
        }
        let loss = |d: f64| eta * 10.0 * (d / ref_distance).log10();

        let mut defender_levels = [0.0; NUM_STRATEGIES];
        for (k, level) in defender_levels.iter_mut().enumerate() {
            *level = NOISE_FLOOR_DBM + loss(100.0 * (k + 1) as f64);
        }

        let mut attacker_bounds = [0.0; NUM_STRATEGIES + 1];
        attacker_bounds[0] = NOISE_FLOOR_DBM;
        for i in 1..NUM_STRATEGIES {
            let d = 100.0 * (NUM_STRATEGIES - i) as f64;
            attacker_bounds[i] = ref_power - loss(d);
        }
        attacker_bounds[NUM_STRATEGIES] = MAX_TX_DBM.max(ref_power);

        Ok(Self {
            attacker_bounds,
            defender_levels,
            eta,
            ref_power,
            ref_distance,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn ref_power(&self) -> f64 {
        self.ref_power
    }

    pub fn ref_distance(&self) -> f64 {
        self.ref_distance
    }

    pub fn defender_levels(&self) -> &[f64; NUM_STRATEGIES] {
        &self.defender_levels
    }

    pub fn defender_level(&self, j: StrategyIndex) -> Dbm {
        Dbm(self.defender_levels[j.zero_based()])
    }

    /// Half-open interval `(lower, upper]` of attacker band `i`.
    pub fn attacker_range(&self, i: StrategyIndex) -> (Dbm, Dbm) {
        let k = i.zero_based();
        (Dbm(self.attacker_bounds[k]), Dbm(self.attacker_bounds[k + 1]))
    }

    pub fn attacker_bounds(&self) -> &[f64; NUM_STRATEGIES + 1] {
        &self.attacker_bounds
    }

    /// Power seen at distance `d` from a transmitter at `tx`.
    pub fn received_power(&self, tx: Dbm, d: f64) -> Result<Dbm> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!("distance must be positive, got {d}")));
        }
        Ok(Dbm(tx.0 - self.eta * 10.0 * (d / self.ref_distance).log10()))
    }

    /// Distance at which a transmitter at `sg` fades to the noise floor.
    pub fn range_radius(&self, sg: Dbm) -> f64 {
        self.ref_distance * 10f64.powf((sg.0 - NOISE_FLOOR_DBM) / (self.eta * 10.0))
    }

    /// Band containing `sg`, or `None` at or below the noise floor.
    /// Values above the top boundary fall in the strongest band.
    pub fn classify_received(&self, sg: Dbm) -> Option<StrategyIndex> {
        if !(sg.0 > NOISE_FLOOR_DBM) {
            return None;
        }
        // first upper bound >= sg
        let pos = self.attacker_bounds[1..]
            .iter()
            .position(|&upper| sg.0 <= upper)
            .unwrap_or(NUM_STRATEGIES - 1);
        Some(StrategyIndex::from_zero_based(pos))
    }

    /// Highest defender level not exceeding `sg`, clamped to level 1.
    pub fn level_at_or_below(&self, sg: Dbm) -> StrategyIndex {
        let pos = self
            .defender_levels
            .iter()
            .rposition(|&level| level <= sg.0 + 1e-9)
            .unwrap_or(0);
        StrategyIndex::from_zero_based(pos)
    }
}

/// Free-function form of [`SignalRangeTable::received_power`].
pub fn received_power(tx: Dbm, d: f64, table: &SignalRangeTable) -> Result<Dbm> {
    table.received_power(tx, d)
}

/// Free-function form of [`SignalRangeTable::classify_received`].
pub fn classify_received(sg: Dbm, table: &SignalRangeTable) -> Option<StrategyIndex> {
    table.classify_received(sg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn s(i: i64) -> StrategyIndex {
        StrategyIndex::new(i).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = Position::new(0.0, 0.0, 0.0);
        assert_eq!(distance(&o, &o), 0.0);
        assert_eq!(distance(&o, &Position::new(3.0, 4.0, 0.0)), 5.0);
        assert_eq!(distance(&Position::new(1.0, 2.0, 2.0), &o), 3.0);
    }

    #[test]
    fn received_power_examples() {
        let t = build_range_table();
        let tx = Dbm(20.0);
        assert_abs_diff_eq!(t.received_power(tx, 1.0).unwrap().0, 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.received_power(tx, 100.0).unwrap().0, -60.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.received_power(tx, 1000.0).unwrap().0, -100.0, epsilon = 1e-12);
    }

    #[test]
    fn received_power_rejects_non_positive_distance() {
        let t = build_range_table();
        assert!(matches!(t.received_power(Dbm(0.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(t.received_power(Dbm(0.0), -3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn range_radius_examples() {
        let t = build_range_table();
        assert_abs_diff_eq!(t.range_radius(Dbm(20.0)), 1000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.range_radius(Dbm(-20.0)), 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.range_radius(Dbm(-100.0)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn table_examples() {
        let t = build_range_table();
        assert_abs_diff_eq!(t.defender_level(s(1)).0, -20.0, epsilon = 1e-9);
        // boundary at 700 m separates bands 3 and 4
        assert_abs_diff_eq!(t.attacker_range(s(4)).0 .0, -93.8, epsilon = 0.1);
        // boundary at 200 m separates bands 8 and 9
        assert_abs_diff_eq!(t.attacker_range(s(9)).0 .0, -72.0, epsilon = 0.1);
        assert_eq!(t.attacker_range(s(1)).0 .0, -100.0);
        assert_eq!(t.attacker_range(s(10)).1 .0, 20.0);
    }

    #[test]
    fn classify_examples() {
        let t = build_range_table();
        // the first boundary is -98.17 before rounding
        assert_eq!(t.classify_received(Dbm(-98.2)), Some(s(1)));
        assert_eq!(t.classify_received(Dbm(-98.1)), Some(s(2)));
        assert_eq!(t.classify_received(Dbm(-59.9)), Some(s(10)));
        assert_eq!(t.classify_received(Dbm(-101.0)), None);
        assert_eq!(t.classify_received(Dbm(-100.0)), None);
        assert_eq!(t.classify_received(Dbm(20.0)), Some(s(10)));
        assert_eq!(t.classify_received(Dbm(-60.0)), Some(s(9)));
    }

    #[test]
    fn md_level_lookup() {
        let t = build_range_table();
        assert_eq!(t.level_at_or_below(Dbm(20.0 - 5.0)), s(7));
        assert_eq!(t.level_at_or_below(Dbm(-25.0)), s(1));
        assert_eq!(t.level_at_or_below(t.defender_level(s(4))), s(4));
    }

    #[test]
    fn strategy_index_bounds() {
        assert!(StrategyIndex::new(0).is_err());
        assert!(StrategyIndex::new(11).is_err());
        assert_eq!(StrategyIndex::all().count(), 10);
        assert_eq!(s(7).zero_based(), 6);
    }

    proptest! {
        #[test]
        fn path_loss_round_trip(k in 0usize..10) {
            let t = build_range_table();
            let sg = Dbm(t.defender_levels()[k]);
            let back = t.received_power(sg, t.range_radius(sg)).unwrap();
            prop_assert!((back.0 - NOISE_FLOOR_DBM).abs() < 1e-9);
        }

        #[test]
        fn classify_partitions(sg in -99.999_999f64..=20.0) {
            let t = build_range_table();
            let hits: Vec<_> = StrategyIndex::all()
                .filter(|&i| {
                    let (lo, hi) = t.attacker_range(i);
                    sg > lo.0 && sg <= hi.0
                })
                .collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(t.classify_received(Dbm(sg)), Some(hits[0]));
        }

        #[test]
        fn triangle_inequality(
            a in prop::array::uniform3(-1e3f64..1e3),
            b in prop::array::uniform3(-1e3f64..1e3),
            c in prop::array::uniform3(-1e3f64..1e3),
        ) {
            let p = |v: [f64; 3]| Position::new(v[0], v[1], v[2]);
            let (a, b, c) = (p(a), p(b), p(c));
            prop_assert!(distance(&a, &c) <= distance(&a, &b) + distance(&b, &c) + 1e-9);
            prop_assert_eq!(distance(&a, &b), distance(&b, &a));
        }
    }
}
