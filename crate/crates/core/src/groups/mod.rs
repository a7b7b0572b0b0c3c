//! Concrete right G-sets: point encodings, generator actions, words and balls.

mod family;
mod free;
mod lamplighter;
mod lattice;
mod perm;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use family::{family_generate, Family, FamilyMember};
pub use free::{render_word, FreeGroup};
pub use lamplighter::{LampElement, Lamplighter};
pub use lattice::Lattice;
pub use perm::PermutationAction;

/// Canonical encoding of a point of a G-set. The derived order is the global
/// label order used for every tie-break in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Int(i64),
    Name(String),
    Lattice(Vec<i64>),
    Lamp(LampElement),
    Free { word: Vec<i32> },
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(n) => write!(f, "{n}"),
            Point::Name(s) => write!(f, "{s}"),
            Point::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Point::Lamp(e) => write!(f, "{e}"),
            Point::Free { word } => write!(f, "{}", render_word(word)),
        }
    }
}

impl From<i64> for Point {
    fn from(n: i64) -> Self {
        Point::Int(n)
    }
}

impl From<&str> for Point {
    fn from(s: &str) -> Self {
        Point::Name(s.to_string())
    }
}

impl From<LampElement> for Point {
    fn from(e: LampElement) -> Self {
        Point::Lamp(e)
    }
}

/// A named generator together with the index of its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub inverse: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, inverse: usize) -> Self {
        Generator {
            name: name.into(),
            inverse,
        }
    }
}

/// A group acting on the right on a set of [`Point`]s through named generators.
pub trait GroupAction: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn generators(&self) -> &[Generator];
    /// Whether `x` belongs to the point universe.
    fn contains(&self, x: &Point) -> bool;
    fn base_point(&self) -> Point;
    /// `x · g` for the generator with index `gen`.
    fn act_generator(&self, x: &Point, gen: usize) -> Result<Point>;

    fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators().iter().position(|g| g.name == name)
    }
}

/// A group element written as a product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Word(vec![index])
    }

    /// Parses `"e"`, a generator name, or names joined by `*`.
    pub fn parse(action: &dyn GroupAction, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        if text == "e" && action.generator_index("e").is_none() {
            return Ok(Word::identity());
        }
        text.split('*')
            .map(|name| {
                let name = name.trim();
                action.generator_index(name).ok_or_else(|| {
                    Error::Parse(format!("unknown generator {name:?} for {}", action.name()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Parses a comma-separated list of words.
    pub fn parse_list(action: &dyn GroupAction, text: &str) -> Result<Vec<Self>> {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| Word::parse(action, s))
            .collect()
    }

    pub fn inverse(&self, action: &dyn GroupAction) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|&g| action.generators()[g].inverse)
                .collect(),
        )
    }

    pub fn then(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn render(&self, action: &dyn GroupAction) -> String {
        if self.0.is_empty() {
            return "e".into();
        }
        let names: Vec<&str> = self
            .0
            .iter()
            .map(|&g| action.generators()[g].name.as_str())
            .collect();
        names.join("*")
    }
}

/// `x · w`.
pub fn act(action: &dyn GroupAction, x: &Point, word: &Word) -> Result<Point> {
    if !action.contains(x) {
        return Err(Error::Domain(format!(
            "{x} is not a point of {}",
            action.name()
        )));
    }
    let mut y = x.clone();
    for &g in &word.0 {
        if g >= action.generators().len() {
            return Err(Error::Parse(format!(
                "generator #{g} out of range for {}",
                action.name()
            )));
        }
        y = action.act_generator(&y, g)?;
    }
    Ok(y)
}

/// All words in the generators of `action` of length one, i.e. the symmetric
/// generating set.
pub fn generator_words(action: &dyn GroupAction) -> Vec<Word> {
    (0..action.generators().len())
        .map(Word::generator)
        .collect()
}

/// Points at word distance at most `radius` from `base`, in point order.
pub fn ball(
    action: &dyn GroupAction,
    base: &Point,
    radius: usize,
    cap: usize,
) -> Result<Vec<Point>> {
    if !action.contains(base) {
        return Err(Error::Domain(format!(
            "{base} is not a point of {}",
            action.name()
        )));
    }
    let mut seen = BTreeSet::from([base.clone()]);
    let mut frontier = vec![base.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for g in 0..action.generators().len() {
                let y = action.act_generator(x, g)?;
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    next.push(y);
                    if seen.len() > cap {
                        return Err(Error::Capacity(format!(
                            "ball of radius {radius} exceeds {cap} points"
                        )));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

/// Parses `Z`, `Z^d`, `lamplighter`, `free:r` or `perm:<file.json>`.
pub fn parse_group_spec(spec: &str) -> Result<Box<dyn GroupAction>> {
    let spec = spec.trim();
    if spec == "Z" {
        return Ok(Box::new(Lattice::integers()));
    }
    if let Some(d) = spec.strip_prefix("Z^") {
        let d = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad lattice dimension in {spec:?}")))?;
        return Ok(Box::new(Lattice::new(d)?));
    }
    if spec == "lamplighter" {
        return Ok(Box::new(Lamplighter::new()));
    }
    if let Some(r) = spec.strip_prefix("free:") {
        let r = r
            .parse()
            .map_err(|_| Error::Parse(format!("bad free group rank in {spec:?}")))?;
        return Ok(Box::new(FreeGroup::new(r)?));
    }
    if let Some(path) = spec.strip_prefix("perm:") {
        return Ok(Box::new(PermutationAction::from_file(Path::new(path))?));
    }
    Err(Error::Parse(format!("unknown group spec {spec:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_step() {
        let z = Lattice::integers();
        let w = Word::parse(&z, "+1").unwrap();
        assert_eq!(act(&z, &Point::Int(5), &w).unwrap(), Point::Int(6));
        assert!(act(&z, &Point::Name("x".into()), &w).is_err());
    }

    #[test]
    fn lamp_toggle() {
        let g = Lamplighter::new();
        let b = Word::parse(&g, "b").unwrap();
        let origin = Point::Lamp(LampElement::identity());
        assert_eq!(
            act(&g, &origin, &b).unwrap(),
            Point::Lamp(LampElement::new([0], 0))
        );
        let x = Point::Lamp(LampElement::new([0], 3));
        assert_eq!(
            act(&g, &x, &b).unwrap(),
            Point::Lamp(LampElement::new([0, 3], 3))
        );
    }

    #[test]
    fn balls() {
        let z = Lattice::integers();
        assert_eq!(ball(&z, &Point::Int(0), 3, 100).unwrap().len(), 7);
        assert_eq!(
            ball(&z, &Point::Int(4), 0, 100).unwrap(),
            vec![Point::Int(4)]
        );
        let f2 = FreeGroup::new(2).unwrap();
        assert_eq!(ball(&f2, &f2.base_point(), 2, 100).unwrap().len(), 17);
        assert!(matches!(
            ball(&f2, &f2.base_point(), 6, 100),
            Err(Error::Capacity(_))
        ));
        let z2 = Lattice::new(2).unwrap();
        assert_eq!(ball(&z2, &z2.base_point(), 2, 100).unwrap().len(), 13);
    }

    #[test]
    fn word_parsing() {
        let f2 = FreeGroup::new(2).unwrap();
        let w = Word::parse(&f2, "a*B").unwrap();
        assert_eq!(w.render(&f2), "a*B");
        let x = act(&f2, &f2.base_point(), &w).unwrap();
        assert_eq!(x.to_string(), "aB");
        assert_eq!(act(&f2, &x, &w.inverse(&f2)).unwrap(), f2.base_point());
        assert_eq!(Word::parse(&f2, "e").unwrap(), Word::identity());
        assert!(Word::parse(&f2, "c").is_err());
        assert_eq!(Word::parse_list(&f2, "a,A,b").unwrap().len(), 3);
    }

    #[test]
    fn specs() {
        assert_eq!(parse_group_spec("Z").unwrap().name(), "Z");
        assert_eq!(parse_group_spec("Z^3").unwrap().generators().len(), 6);
        assert_eq!(parse_group_spec("free:2").unwrap().generators().len(), 4);
        assert_eq!(
            parse_group_spec("lamplighter").unwrap().generators().len(),
            3
        );
        assert!(parse_group_spec("SL2").is_err());
        assert!(parse_group_spec("perm:/nonexistent.json").is_err());
    }

    #[test]
    fn permutations() {
        let p = PermutationAction::from_json(
            "s3",
            r#"{"points": 3, "generators": [{"name": "s", "perm": [1, 0, 2]}, {"name": "r", "perm": [1, 2, 0]}]}"#,
        )
        .unwrap();
        assert_eq!(p.generators().len(), 3);
        let r = Word::parse(&p, "r").unwrap();
        assert_eq!(act(&p, &Point::Int(2), &r).unwrap(), Point::Int(0));
        let rinv = Word::parse(&p, "r^-1").unwrap();
        assert_eq!(act(&p, &Point::Int(0), &rinv).unwrap(), Point::Int(2));
        assert!(PermutationAction::new("bad", 2, vec![("x".into(), vec![0, 0])]).is_err());
    }

    #[test]
    fn point_json() {
        let pts = vec![
            Point::Int(3),
            Point::Name("a".into()),
            Point::Lattice(vec![1, -2]),
            Point::Lamp(LampElement::new([0, 3], 3)),
            Point::Free { word: vec![1, -2] },
        ];
        let text = serde_json::to_string(&pts).unwrap();
        assert_eq!(
            text,
            r#"[3,"a",[1,-2],{"lamps":[0,3],"pos":3},{"word":[1,-2]}]"#
        );
        let back: Vec<Point> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pts);
    }
}
