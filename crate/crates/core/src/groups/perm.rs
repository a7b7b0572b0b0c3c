use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groups::{Generator, GroupAction, Point};

/// A finite group given by permutations of `{0, …, m-1}`, acting on the right
/// by `x·σ = σ[x]`.
#[derive(Debug, Clone)]
pub struct PermutationAction {
    label: String,
    points: usize,
    gens: Vec<Generator>,
    perms: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct PermFile {
    points: usize,
    generators: Vec<PermGen>,
}

#[derive(Debug, Deserialize)]
struct PermGen {
    name: String,
    perm: Vec<usize>,
}

impl PermutationAction {
    /// Inverses are added automatically as `name^-1` unless the generator is
    /// an involution.
    pub fn new(
        label: impl Into<String>,
        points: usize,
        named: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        let mut gens = Vec::new();
        let mut perms = Vec::new();
        for (name, perm) in named {
            if perm.len() != points {
                return Err(Error::Shape(format!(
                    "permutation {name} has length {}, expected {points}",
                    perm.len()
                )));
            }
            let mut inv = vec![usize::MAX; points];
            for (x, &y) in perm.iter().enumerate() {
                if y >= points || inv[y] != usize::MAX {
                    return Err(Error::Domain(format!(
                        "{name} is not a permutation of 0..{points}"
                    )));
                }
                inv[y] = x;
            }
            let i = gens.len();
            if inv == perm {
                gens.push(Generator::new(name, i));
                perms.push(perm);
            } else {
                gens.push(Generator::new(name.clone(), i + 1));
                gens.push(Generator::new(format!("{name}^-1"), i));
                perms.push(perm);
                perms.push(inv);
            }
        }
        Ok(PermutationAction {
            label: label.into(),
            points,
            gens,
            perms,
        })
    }

    pub fn from_json(label: impl Into<String>, text: &str) -> Result<Self> {
        let file: PermFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            label,
            file.points,
            file.generators
                .into_iter()
                .map(|g| (g.name, g.perm))
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(format!("perm:{}", path.display()), &text)
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.points as i64).map(Point::Int).collect()
    }
}

impl GroupAction for PermutationAction {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn contains(&self, x: &Point) -> bool {
        matches!(x, Point::Int(i) if *i >= 0 && (*i as usize) < self.points)
    }

    fn base_point(&self) -> Point {
        Point::Int(0)
    }

    fn act_generator(&self, x: &Point, gen: usize) -> Result<Point> {
        let perm = self
            .perms
            .get(gen)
            .ok_or_else(|| Error::Domain(format!("no generator #{gen} in {}", self.label)))?;
        match x {
            Point::Int(i) if self.contains(x) => Ok(Point::Int(perm[*i as usize] as i64)),
            _ => Err(Error::Domain(format!(
                "{x} is not a point of {}",
                self.label
            ))),
        }
    }
}
