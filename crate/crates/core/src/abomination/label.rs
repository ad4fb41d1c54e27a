use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element families, in the order ids are assigned within a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    EA,
    EB,
    Y,
}

impl Kind {
    pub fn prefix(self) -> &'static str {
        match self {
            Kind::A => "a",
            Kind::B => "b",
            Kind::C => "c",
            Kind::D => "d",
            Kind::EA => "ea",
            Kind::EB => "eb",
            Kind::Y => "y",
        }
    }

    pub fn is_indexed(self) -> bool {
        !matches!(self, Kind::A | Kind::B)
    }
}

/// A structured element name such as `c3_5` (kind C, level 3, index 5).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbominationLabel {
    pub kind: Kind,
    pub level: usize,
    pub index: Option<usize>,
}

impl AbominationLabel {
    pub fn a(level: usize) -> Self {
        AbominationLabel {
            kind: Kind::A,
            level,
            index: None,
        }
    }

    pub fn b(level: usize) -> Self {
        AbominationLabel {
            kind: Kind::B,
            level,
            index: None,
        }
    }

    /// Panics for `A` and `B`, which carry no index.
    pub fn indexed(kind: Kind, level: usize, index: usize) -> Self {
        assert!(kind.is_indexed(), "{kind:?} labels have no index");
        AbominationLabel {
            kind,
            level,
            index: Some(index),
        }
    }

    pub fn c(level: usize, index: usize) -> Self {
        Self::indexed(Kind::C, level, index)
    }

    pub fn d(level: usize, index: usize) -> Self {
        Self::indexed(Kind::D, level, index)
    }

    pub fn ea(level: usize, index: usize) -> Self {
        Self::indexed(Kind::EA, level, index)
    }

    pub fn eb(level: usize, index: usize) -> Self {
        Self::indexed(Kind::EB, level, index)
    }

    pub fn y(level: usize, index: usize) -> Self {
        Self::indexed(Kind::Y, level, index)
    }
}

impl fmt::Display for AbominationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.level)?;
        if let Some(i) = self.index {
            write!(f, "_{i}")?;
        }
        Ok(())
    }
}

impl FromStr for AbominationLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad label {s:?}"));
        let digits_at = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let kind = match &s[..digits_at] {
            "a" => Kind::A,
            "b" => Kind::B,
            "c" => Kind::C,
            "d" => Kind::D,
            "ea" => Kind::EA,
            "eb" => Kind::EB,
            "y" => Kind::Y,
            _ => return Err(bad()),
        };
        let rest = &s[digits_at..];
        let (level, index) = match rest.split_once('_') {
            Some((l, i)) => (l, Some(i)),
            None => (rest, None),
        };
        let level = level.parse().map_err(|_| bad())?;
        let index = index.map(|i| i.parse()).transpose().map_err(|_| bad())?;
        if kind.is_indexed() != index.is_some() {
            return Err(bad());
        }
        Ok(AbominationLabel { kind, level, index })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["a3", "b0", "c3_5", "d3_5", "ea3_5", "eb12_0", "y3_5"] {
            let l: AbominationLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        for s in ["a3_1", "c3", "x1_1", "ea", "c_1"] {
            assert!(s.parse::<AbominationLabel>().is_err(), "{s}");
        }
    }
}
