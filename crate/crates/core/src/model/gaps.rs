use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance used when comparing GAPs for regime classification.
pub const GAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Item {
    A,
    B,
}

impl Item {
    #[inline]
    pub fn other(self) -> Item {
        match self {
            Item::A => Item::B,
            Item::B => Item::A,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Global adoption probabilities: `q_x0` is the chance of adopting X when informed while
/// not holding the other item, `q_xy` when already holding it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSet {
    #[serde(rename = "qA0")]
    pub q_a0: f64,
    #[serde(rename = "qAB")]
    pub q_ab: f64,
    #[serde(rename = "qB0")]
    pub q_b0: f64,
    #[serde(rename = "qBA")]
    pub q_ba: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Independent,
    OneWayComplementBToA,
    OneWayComplementAToB,
    MutualComplement,
    MutualCompete,
    Mixed,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Independent => "independent",
            Regime::OneWayComplementBToA => "one_way_complement_B_to_A",
            Regime::OneWayComplementAToB => "one_way_complement_A_to_B",
            Regime::MutualComplement => "mutual_complement",
            Regime::MutualCompete => "mutual_compete",
            Regime::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + GAP_TOL
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= GAP_TOL
}

impl GapSet {
    pub fn new(q_a0: f64, q_ab: f64, q_b0: f64, q_ba: f64) -> Result<GapSet> {
        let q = GapSet { q_a0, q_ab, q_b0, q_ba };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("qA0", self.q_a0), ("qAB", self.q_ab), ("qB0", self.q_b0), ("qBA", self.q_ba)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Probability of adopting `item` when informed; `holds_other` says whether the other
    /// item is already adopted.
    #[inline]
    pub fn q(&self, item: Item, holds_other: bool) -> f64 {
        match (item, holds_other) {
            (Item::A, false) => self.q_a0,
            (Item::A, true) => self.q_ab,
            (Item::B, false) => self.q_b0,
            (Item::B, true) => self.q_ba,
        }
    }

    /// Chance that a node suspended on `item` adopts it after adopting the other item.
    pub fn reconsider(&self, item: Item) -> f64 {
        let (base, cond) = match item {
            Item::A => (self.q_a0, self.q_ab),
            Item::B => (self.q_b0, self.q_ba),
        };
        if base >= 1.0 {
            0.0
        } else {
            ((cond - base).max(0.0) / (1.0 - base)).min(1.0)
        }
    }

    pub fn is_mutual_complement(&self) -> bool {
        le(self.q_a0, self.q_ab) && le(self.q_b0, self.q_ba)
    }

    pub fn is_mutual_compete(&self) -> bool {
        le(self.q_ab, self.q_a0) && le(self.q_ba, self.q_b0)
    }

    pub fn regime(&self) -> Regime {
        let (ia, ib) = (eq(self.q_a0, self.q_ab), eq(self.q_b0, self.q_ba));
        if ia && ib {
            Regime::Independent
        } else if ib && self.q_a0 < self.q_ab {
            Regime::OneWayComplementBToA
        } else if ia && self.q_b0 < self.q_ba {
            Regime::OneWayComplementAToB
        } else if self.is_mutual_complement() {
            Regime::MutualComplement
        } else if self.is_mutual_compete() {
            Regime::MutualCompete
        } else {
            Regime::Mixed
        }
    }

    /// B complements A (weakly) and B ignores A: the setting where A's spread is
    /// submodular in the A-seeds.
    pub fn is_self_submodular(&self) -> bool {
        le(self.q_a0, self.q_ab) && eq(self.q_b0, self.q_ba)
    }

    /// Complementary GAPs where A never blocks B: the setting where the boost is
    /// submodular in the B-seeds.
    pub fn is_cross_submodular(&self) -> bool {
        self.is_mutual_complement() && eq(self.q_ba, 1.0)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q_a0, self.q_ab, self.q_b0, self.q_ba]
    }

    pub(crate) fn regime_error(&self, why: impl Into<String>) -> Error {
        Error::Regime { gaps: self.to_string(), why: why.into() }
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.q_a0, self.q_ab, self.q_b0, self.q_ba)
    }
}

impl FromStr for GapSet {
    type Err = Error;

    /// Accepts `"qA0,qAB,qB0,qBA"` or a JSON object with those keys.
    fn from_str(s: &str) -> Result<GapSet> {
        let s = s.trim();
        let q = if s.starts_with('{') {
            serde_json::from_str::<GapSet>(s).map_err(|e| invalid(format!("GAP JSON: {e}")))?
        } else {
            let parts: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad GAP value {x:?}"))))
                .collect::<Result<_>>()?;
            if parts.len() != 4 {
                return Err(invalid(format!("expected 4 GAPs, found {}", parts.len())));
            }
            GapSet { q_a0: parts[0], q_ab: parts[1], q_b0: parts[2], q_ba: parts[3] }
        };
        q.validate()?;
        Ok(q)
    }
}
