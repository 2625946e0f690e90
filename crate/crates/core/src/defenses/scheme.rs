use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Mitigation;
use crate::error::{Error, Result};

/// Defense schemes by their stable identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DefenseKind {
    HdFixed,
    HdHt,
    HdDrl,
    HdHtDrl,
    Ids,
    Container,
    NoDefense,
}

/// Attack schemes by their stable identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AttackKind {
    Fixed,
    Ht,
    Drl,
    HtDrl,
}

/// How a player picks its strategy each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Fixed,
    Ht,
    Drl,
    HtDrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FleetMode {
    WithHds,
    NoHds,
}

impl DefenseKind {
    pub const ALL: [DefenseKind; 7] = [
        DefenseKind::HdHtDrl,
        DefenseKind::HdDrl,
        DefenseKind::HdHt,
        DefenseKind::HdFixed,
        DefenseKind::Ids,
        DefenseKind::Container,
        DefenseKind::NoDefense,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DefenseKind::HdFixed => "HD-F",
            DefenseKind::HdHt => "HD-HT",
            DefenseKind::HdDrl => "HD-DRL",
            DefenseKind::HdHtDrl => "HD-HT-DRL",
            DefenseKind::Ids => "IDS",
            DefenseKind::Container => "CD",
            DefenseKind::NoDefense => "NoDefense",
        }
    }

    /// Schemes without honey drones hold a fixed level for their mission drones.
    pub fn selector(self) -> Selector {
        match self {
            DefenseKind::HdHt => Selector::Ht,
            DefenseKind::HdDrl => Selector::Drl,
            DefenseKind::HdHtDrl => Selector::HtDrl,
            _ => Selector::Fixed,
        }
    }

    pub fn fleet_mode(self) -> FleetMode {
        match self {
            DefenseKind::HdFixed | DefenseKind::HdHt | DefenseKind::HdDrl | DefenseKind::HdHtDrl => {
                FleetMode::WithHds
            }
            _ => FleetMode::NoHds,
        }
    }

    pub fn mitigation(self, ids_detect_prob: f64) -> Mitigation {
        match self {
            DefenseKind::Ids => Mitigation::Ids { detect_prob: ids_detect_prob },
            DefenseKind::Container => Mitigation::Container,
            DefenseKind::NoDefense => Mitigation::None,
            _ => Mitigation::HoneyAbsorb,
        }
    }
}

impl AttackKind {
    pub const ALL: [AttackKind; 4] = [AttackKind::Fixed, AttackKind::Ht, AttackKind::Drl, AttackKind::HtDrl];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::Fixed => "A-Fixed",
            AttackKind::Ht => "A-HT",
            AttackKind::Drl => "A-DRL",
            AttackKind::HtDrl => "A-HT-DRL",
        }
    }

    pub fn selector(self) -> Selector {
        match self {
            AttackKind::Fixed => Selector::Fixed,
            AttackKind::Ht => Selector::Ht,
            AttackKind::Drl => Selector::Drl,
            AttackKind::HtDrl => Selector::HtDrl,
        }
    }
}

impl fmt::Display for DefenseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DefenseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DefenseKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown defense scheme {s:?}")))
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown attack scheme {s:?}")))
    }
}

impl TryFrom<String> for DefenseKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl TryFrom<String> for AttackKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DefenseKind> for String {
    fn from(k: DefenseKind) -> Self {
        k.as_str().to_string()
    }
}

impl From<AttackKind> for String {
    fn from(k: AttackKind) -> Self {
        k.as_str().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in DefenseKind::ALL {
            assert_eq!(k.as_str().parse::<DefenseKind>().unwrap(), k);
        }
        for k in AttackKind::ALL {
            assert_eq!(k.as_str().parse::<AttackKind>().unwrap(), k);
        }
        assert!("HD-X".parse::<DefenseKind>().is_err());
    }

    #[test]
    fn honey_schemes_absorb() {
        for k in DefenseKind::ALL {
            let hd = k.fleet_mode() == FleetMode::WithHds;
            assert_eq!(hd, k.mitigation(0.8) == Mitigation::HoneyAbsorb);
        }
    }
}
