use crate::error::{Error, Result};
use crate::groups::{Generator, GroupAction, Point};

/// `Z^d` acting on itself by translation. Points of `Z` are plain integers,
/// points of `Z^d` for `d >= 2` are integer vectors.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    gens: Vec<Generator>,
}

impl Lattice {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain(
                "Z^0 is trivial; use a dimension of at least 1".into(),
            ));
        }
        let gens = (0..dim)
            .flat_map(|i| {
                let (up, down) = if dim == 1 {
                    ("+1".to_string(), "-1".to_string())
                } else {
                    (format!("+e{}", i + 1), format!("-e{}", i + 1))
                };
                [Generator::new(up, 2 * i + 1), Generator::new(down, 2 * i)]
            })
            .collect();
        Ok(Lattice { dim, gens })
    }

    pub fn integers() -> Self {
        Lattice::new(1).expect("dimension 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl GroupAction for Lattice {
    fn name(&self) -> String {
        if self.dim == 1 {
            "Z".into()
        } else {
            format!("Z^{}", self.dim)
        }
    }

    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn contains(&self, x: &Point) -> bool {
        match x {
            Point::Int(_) => self.dim == 1,
            Point::Lattice(v) => self.dim > 1 && v.len() == self.dim,
            _ => false,
        }
    }

    fn base_point(&self) -> Point {
        if self.dim == 1 {
            Point::Int(0)
        } else {
            Point::Lattice(vec![0; self.dim])
        }
    }

    fn act_generator(&self, x: &Point, gen: usize) -> Result<Point> {
        if gen >= self.gens.len() {
            return Err(Error::Domain(format!(
                "no generator #{gen} in {}",
                self.name()
            )));
        }
        let step = if gen.is_multiple_of(2) { 1 } else { -1 };
        match x {
            Point::Int(n) if self.dim == 1 => Ok(Point::Int(n + step)),
            Point::Lattice(v) if self.contains(x) => {
                let mut v = v.clone();
                v[gen / 2] += step;
                Ok(Point::Lattice(v))
            }
            _ => Err(Error::Domain(format!(
                "{x} is not a point of {}",
                self.name()
            ))),
        }
    }
}
