use crate::error::{Error, Result};
use crate::groups::{Generator, GroupAction, Point};

/// The free group of rank `r` acting on itself on the right. Points are
/// reduced words; letter `k` (1-based) is the `k`-th generator, `-k` its inverse.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
    gens: Vec<Generator>,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::Domain(format!(
                "free group rank must be in 1..=26, got {rank}"
            )));
        }
        let gens = (0..rank)
            .flat_map(|i| {
                let c = (b'a' + i as u8) as char;
                [
                    Generator::new(c.to_string(), 2 * i + 1),
                    Generator::new(c.to_ascii_uppercase().to_string(), 2 * i),
                ]
            })
            .collect();
        Ok(FreeGroup { rank, gens })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn letter(gen: usize) -> i32 {
        let k = (gen / 2 + 1) as i32;
        if gen.is_multiple_of(2) {
            k
        } else {
            -k
        }
    }
}

pub fn render_word(word: &[i32]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter()
        .map(|&l| {
            let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
            if l > 0 {
                c
            } else {
                c.to_ascii_uppercase()
            }
        })
        .collect()
}

impl GroupAction for FreeGroup {
    fn name(&self) -> String {
        format!("free:{}", self.rank)
    }

    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn contains(&self, x: &Point) -> bool {
        match x {
            Point::Free { word } => {
                word.iter()
                    .all(|&l| l != 0 && l.unsigned_abs() as usize <= self.rank)
                    && word.windows(2).all(|w| w[0] != -w[1])
            }
            _ => false,
        }
    }

    fn base_point(&self) -> Point {
        Point::Free { word: Vec::new() }
    }

    fn act_generator(&self, x: &Point, gen: usize) -> Result<Point> {
        if gen >= self.gens.len() {
            return Err(Error::Domain(format!(
                "no generator #{gen} in {}",
                self.name()
            )));
        }
        if !self.contains(x) {
            return Err(Error::Domain(format!(
                "{x} is not a reduced word of {}",
                self.name()
            )));
        }
        let Point::Free { word } = x else {
            unreachable!()
        };
        let l = Self::letter(gen);
        let mut word = word.clone();
        if word.last() == Some(&-l) {
            word.pop();
        } else {
            word.push(l);
        }
        Ok(Point::Free { word })
    }
}
