use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Generator, GroupAction, Point};

/// An element `(f, t)` of the lamplighter group: the finite set of lit lamps
/// (the support of `f : Z -> Z/2`) and the lamplighter position `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LampElement {
    pub lamps: Vec<i64>,
    pub pos: i64,
}

impl LampElement {
    pub fn new(lamps: impl IntoIterator<Item = i64>, pos: i64) -> Self {
        let set: BTreeSet<i64> = lamps.into_iter().collect();
        LampElement {
            lamps: set.into_iter().collect(),
            pos,
        }
    }

    pub fn identity() -> Self {
        LampElement {
            lamps: Vec::new(),
            pos: 0,
        }
    }

    /// `(f, t)(g, u) = (f + g(. - t), t + u)`.
    pub fn mul(&self, other: &LampElement) -> LampElement {
        let mut lit: BTreeSet<i64> = self.lamps.iter().copied().collect();
        for &s in &other.lamps {
            let s = s + self.pos;
            if !lit.remove(&s) {
                lit.insert(s);
            }
        }
        LampElement {
            lamps: lit.into_iter().collect(),
            pos: self.pos + other.pos,
        }
    }

    /// Toggles the lamp under the lamplighter: right multiplication by `b = (δ₀, 0)`.
    pub fn toggle(&self) -> LampElement {
        let mut lamps = self.lamps.clone();
        match lamps.binary_search(&self.pos) {
            Ok(i) => {
                lamps.remove(i);
            }
            Err(i) => lamps.insert(i, self.pos),
        }
        LampElement {
            lamps,
            pos: self.pos,
        }
    }

    pub fn shift(&self, by: i64) -> LampElement {
        LampElement {
            lamps: self.lamps.clone(),
            pos: self.pos + by,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.lamps.windows(2).all(|w| w[0] < w[1])
    }
}

impl std::fmt::Display for LampElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lamps: Vec<String> = self.lamps.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}@{}", lamps.join(","), self.pos)
    }
}

/// `(Z/2) ≀ Z` acting on itself by right multiplication, generated by `±1`
/// (moves of the lamplighter) and `b` (toggle the lamp at the current position).
#[derive(Debug, Clone)]
pub struct Lamplighter {
    gens: Vec<Generator>,
}

pub const STEP: usize = 0;
pub const BACK: usize = 1;
pub const TOGGLE: usize = 2;

impl Default for Lamplighter {
    fn default() -> Self {
        Lamplighter {
            gens: vec![
                Generator::new("+1", BACK),
                Generator::new("-1", STEP),
                Generator::new("b", TOGGLE),
            ],
        }
    }
}

impl Lamplighter {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GroupAction for Lamplighter {
    fn name(&self) -> String {
        "lamplighter".into()
    }

    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn contains(&self, x: &Point) -> bool {
        matches!(x, Point::Lamp(e) if e.is_canonical())
    }

    fn base_point(&self) -> Point {
        Point::Lamp(LampElement::identity())
    }

    fn act_generator(&self, x: &Point, gen: usize) -> Result<Point> {
        let Point::Lamp(e) = x else {
            return Err(Error::Domain(format!("{x} is not a lamplighter element")));
        };
        Ok(Point::Lamp(match gen {
            STEP => e.shift(1),
            BACK => e.shift(-1),
            TOGGLE => e.toggle(),
            _ => {
                return Err(Error::Domain(format!(
                    "no generator #{gen} in the lamplighter group"
                )))
            }
        }))
    }
}
