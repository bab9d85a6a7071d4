use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The branching cases of a covering dominated by a genus 0 or 1 Galois covering.
///
/// The four torus cases carry a root-of-unity group `W` and a choice of
/// generator `S_Λ = ℘^{(s)}` for the `W`-invariant elliptic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    StarStar,
    TwoTwoStar,
    P233,
    P234,
    P235,
    P236,
    P244,
    P333,
    P2222,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown case {0:?} (expected one of **, 22*, 233, 234, 235, 236, 244, 333, 2222)")]
pub struct UnknownCase(pub String);

impl CaseTag {
    pub const ALL: [CaseTag; 9] = [
        CaseTag::StarStar,
        CaseTag::TwoTwoStar,
        CaseTag::P233,
        CaseTag::P234,
        CaseTag::P235,
        CaseTag::P236,
        CaseTag::P244,
        CaseTag::P333,
        CaseTag::P2222,
    ];

    pub const TORUS: [CaseTag; 4] = [CaseTag::P2222, CaseTag::P333, CaseTag::P244, CaseTag::P236];

    /// `|W|` for the torus cases.
    pub fn w_order(self) -> Option<u32> {
        match self {
            CaseTag::P2222 => Some(2),
            CaseTag::P333 => Some(3),
            CaseTag::P244 => Some(4),
            CaseTag::P236 => Some(6),
            _ => None,
        }
    }

    /// Which derivative of `℘` serves as `S_Λ`.
    pub fn s_derivative_order(self) -> Option<usize> {
        match self {
            CaseTag::P2222 => Some(0),
            CaseTag::P333 => Some(1),
            CaseTag::P244 => Some(2),
            CaseTag::P236 => Some(4),
            _ => None,
        }
    }

    pub fn is_torus(self) -> bool {
        self.w_order().is_some()
    }

    /// Local multiplicities, with 0 standing for an unconstrained entry.
    pub fn multiplicities(self) -> &'static [u32] {
        match self {
            CaseTag::StarStar => &[0, 0],
            CaseTag::TwoTwoStar => &[2, 2, 0],
            CaseTag::P233 => &[2, 3, 3],
            CaseTag::P234 => &[2, 3, 4],
            CaseTag::P235 => &[2, 3, 5],
            CaseTag::P236 => &[2, 3, 6],
            CaseTag::P244 => &[2, 4, 4],
            CaseTag::P333 => &[3, 3, 3],
            CaseTag::P2222 => &[2, 2, 2, 2],
        }
    }

    /// Short name used on the command line and in JSON (`2222`, `333`, ...).
    pub fn short_name(self) -> &'static str {
        match self {
            CaseTag::StarStar => "**",
            CaseTag::TwoTwoStar => "22*",
            CaseTag::P233 => "233",
            CaseTag::P234 => "234",
            CaseTag::P235 => "235",
            CaseTag::P236 => "236",
            CaseTag::P244 => "244",
            CaseTag::P333 => "333",
            CaseTag::P2222 => "2222",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .iter()
            .map(|&d| {
                if d == 0 {
                    "*".to_string()
                } else {
                    d.to_string()
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for CaseTag {
    type Err = UnknownCase;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .collect();
        let key = key.to_ascii_uppercase();
        let key = key.trim_start_matches('P');
        CaseTag::ALL
            .into_iter()
            .find(|c| c.short_name() == key)
            .ok_or_else(|| UnknownCase(s.to_string()))
    }
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.short_name())
    }
}

impl<'de> Deserialize<'de> for CaseTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_table() {
        let table: Vec<_> = CaseTag::TORUS
            .iter()
            .map(|c| (c.w_order().unwrap(), c.s_derivative_order().unwrap()))
            .collect();
        assert_eq!(table, vec![(2, 0), (3, 1), (4, 2), (6, 4)]);
        assert!(CaseTag::P235.w_order().is_none());
        assert!(!CaseTag::StarStar.is_torus());
    }

    #[test]
    fn parse_and_display() {
        for c in CaseTag::ALL {
            assert_eq!(c.short_name().parse::<CaseTag>().unwrap(), c);
            assert_eq!(c.to_string().parse::<CaseTag>().unwrap(), c);
        }
        assert_eq!("P2222".parse::<CaseTag>().unwrap(), CaseTag::P2222);
        assert_eq!(CaseTag::TwoTwoStar.to_string(), "(2,2,*)");
        assert!("237".parse::<CaseTag>().is_err());
        assert_eq!(serde_json::to_string(&CaseTag::P244).unwrap(), "\"244\"");
        assert_eq!(
            serde_json::from_str::<CaseTag>("\"22*\"").unwrap(),
            CaseTag::TwoTwoStar
        );
    }
}
