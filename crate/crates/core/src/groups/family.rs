use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::groups::{GroupAction, LampElement, Lamplighter, Lattice, Point, Word};
use crate::linalg::{Field, LabeledSubspace};

/// Largest `n` accepted for the lamplighter families (`2^n·n` points).
pub const MAX_LAMP_N: usize = 16;
/// Largest `n` accepted for the interval families.
pub const MAX_INTERVAL_N: usize = 1 << 20;

/// The explicit Følner families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{(f, t) : 1 ≤ t ≤ n, supp f ⊆ {1..n}}` in the lamplighter group.
    LampBox,
    /// `⟨Σ_{supp f ⊆ {1..n}} (f, t) : 1 ≤ t ≤ n⟩` in the lamplighter group algebra.
    LampSpan,
    /// `{1..n}` in `Z`.
    ZInterval,
    /// `K{1..n}` in `K Z`.
    ZIntervalSpan,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lamp-box" => Ok(Family::LampBox),
            "lamp-span" => Ok(Family::LampSpan),
            "z-interval" => Ok(Family::ZInterval),
            "z-interval-span" => Ok(Family::ZIntervalSpan),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::LampBox => "lamp-box",
            Family::LampSpan => "lamp-span",
            Family::ZInterval => "z-interval",
            Family::ZIntervalSpan => "z-interval-span",
        })
    }
}

impl Family {
    pub fn is_span(self) -> bool {
        matches!(self, Family::LampSpan | Family::ZIntervalSpan)
    }

    /// The group the family lives in.
    pub fn action(self) -> Box<dyn GroupAction> {
        match self {
            Family::LampBox | Family::LampSpan => Box::new(Lamplighter::new()),
            Family::ZInterval | Family::ZIntervalSpan => Box::new(Lattice::integers()),
        }
    }

    /// The symmetric generating set used with the family: `{+1, -1, b}` or `{+1, -1}`.
    pub fn default_generators(self) -> Vec<Word> {
        let action = self.action();
        crate::groups::generator_words(action.as_ref())
    }

    fn check(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain(format!("{self} needs n >= 1")));
        }
        let cap = match self {
            Family::LampBox | Family::LampSpan => MAX_LAMP_N,
            _ => MAX_INTERVAL_N,
        };
        if n > cap {
            return Err(Error::Capacity(format!(
                "{self}({n}) exceeds the cap n <= {cap}"
            )));
        }
        Ok(())
    }

    /// Underlying point set (for the span families, the coordinate support).
    pub fn points(self, n: usize) -> Result<Vec<Point>> {
        self.check(n)?;
        Ok(match self {
            Family::LampBox | Family::LampSpan => lamp_box(n),
            Family::ZInterval | Family::ZIntervalSpan => (1..=n as i64).map(Point::Int).collect(),
        })
    }
}

/// A generated family member.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyMember<F: Field> {
    Set(Vec<Point>),
    Span(LabeledSubspace<F>),
}

impl<F: Field> FamilyMember<F> {
    /// `#F` or `dim F`.
    pub fn size(&self) -> usize {
        match self {
            FamilyMember::Set(s) => s.len(),
            FamilyMember::Span(v) => v.dim(),
        }
    }
}

/// The `n`-th member of a family; `field` is used only by the span families.
pub fn family_generate<F: Field>(kind: Family, n: usize, field: &F) -> Result<FamilyMember<F>> {
    let points = kind.points(n)?;
    Ok(match kind {
        Family::LampBox | Family::ZInterval => FamilyMember::Set(points),
        Family::ZIntervalSpan => {
            FamilyMember::Span(LabeledSubspace::coordinate_span(field.clone(), &points)?)
        }
        Family::LampSpan => {
            let mut slices: Vec<BTreeMap<Point, F::Elem>> = vec![BTreeMap::new(); n];
            for p in points {
                let Point::Lamp(e) = &p else { unreachable!() };
                slices[(e.pos - 1) as usize].insert(p, field.one());
            }
            FamilyMember::Span(LabeledSubspace::from_sparse(field.clone(), &slices))
        }
    })
}

fn lamp_box(n: usize) -> Vec<Point> {
    let mut out: Vec<Point> = (1..=n as i64)
        .flat_map(|t| {
            (0u64..1 << n).map(move |mask| {
                let lamps = (0..n as i64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1);
                Point::Lamp(LampElement::new(lamps, t))
            })
        })
        .collect();
    out.sort();
    out
}
