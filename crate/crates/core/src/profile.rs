//! Isoperimetric profiles: exhaustive search inside a finite window, upper
//! bounds from explicit families, and the inverse profile `Φ`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{chunked_reduce, Execution};
use crate::folner::{set_report, set_to_subspace, subspace_report, words_as_multipliers};
use crate::groups::{act, family_generate, Family, FamilyMember, GroupAction, Point, Word};
use crate::linalg::Field;
use crate::rational::{self, Rational};

pub const MAX_WINDOW: usize = 24;
pub const MAX_EXACT_V: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ProfileMode {
    /// Minimum over all subsets of the window; exact within the window only.
    Exact { window: String, window_size: usize },
    /// Running minimum over an explicit family; an upper bound on `I`.
    FamilyUpperBound { family: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub v: usize,
    #[serde(with = "rational::text")]
    pub ratio: Rational,
    pub witness: String,
    /// The witness set, when the witness is a set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileTable {
    #[serde(flatten)]
    pub mode: ProfileMode,
    pub generators: Vec<String>,
    pub rows: Vec<ProfileRow>,
}

impl ProfileTable {
    pub fn is_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].ratio <= w[0].ratio)
    }

    /// `(v, ratio_num, ratio_den, witness)` records.
    pub fn csv_records(&self) -> Vec<[String; 4]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.v.to_string(),
                    r.ratio.numer().to_string(),
                    r.ratio.denom().to_string(),
                    r.witness.clone(),
                ]
            })
            .collect()
    }
}

pub fn render_set(points: &[Point]) -> String {
    let parts: Vec<String> = points.iter().map(Point::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Best `(boundary, mask)` per subset size.
type Best = Vec<Option<(u32, u32)>>;

/// Lexicographic order on the increasing index lists encoded by two masks.
fn lex_cmp(a: u32, b: u32) -> Ordering {
    let d = a ^ b;
    if d == 0 {
        return Ordering::Equal;
    }
    let k = d.trailing_zeros();
    let (with, without) = if a & (1 << k) != 0 { (a, b) } else { (b, a) };
    let without_rest = if k >= 31 { 0 } else { without >> (k + 1) };
    let with_smaller = without_rest != 0;
    match (with == a, with_smaller) {
        (true, true) | (false, false) => Ordering::Less,
        _ => Ordering::Greater,
    }
}

fn better(cand: (u32, u32), cur: Option<(u32, u32)>) -> bool {
    match cur {
        None => true,
        Some(c) => cand.0 < c.0 || (cand.0 == c.0 && lex_cmp(cand.1, c.1) == Ordering::Less),
    }
}

fn merge(mut a: Best, b: Best) -> Best {
    for (x, y) in a.iter_mut().zip(b) {
        if let Some(y) = y {
            if better(y, *x) {
                *x = Some(y);
            }
        }
    }
    a
}

/// Incremental boundary count `#(FS \ F)` over the extended universe
/// `window ∪ window·S`.
struct BoundaryState<'a> {
    images: &'a [Vec<u32>],
    n: usize,
    hits: Vec<u16>,
    mask: u32,
    boundary: u32,
}

impl<'a> BoundaryState<'a> {
    fn new(images: &'a [Vec<u32>], n: usize, universe: usize) -> Self {
        BoundaryState {
            images,
            n,
            hits: vec![0; universe],
            mask: 0,
            boundary: 0,
        }
    }

    fn in_set(&self, u: u32) -> bool {
        (u as usize) < self.n && self.mask & (1 << u) != 0
    }

    fn insert(&mut self, i: usize) {
        self.mask |= 1 << i;
        if self.hits[i] > 0 {
            self.boundary -= 1;
        }
        for &u in &self.images[i] {
            self.hits[u as usize] += 1;
            if self.hits[u as usize] == 1 && !self.in_set(u) {
                self.boundary += 1;
            }
        }
    }

    fn remove(&mut self, i: usize) {
        for &u in &self.images[i] {
            self.hits[u as usize] -= 1;
            if self.hits[u as usize] == 0 && !self.in_set(u) {
                self.boundary -= 1;
            }
        }
        self.mask &= !(1 << i);
        if self.hits[i] > 0 {
            self.boundary += 1;
        }
    }

    fn toggle(&mut self, i: usize) {
        if self.mask & (1 << i) != 0 {
            self.remove(i)
        } else {
            self.insert(i)
        }
    }
}

/// `I(v, S)` for `v = 1..=v_max`, minimizing `(#(F ∪ FS) - #F)/#F` over all
/// non-empty `F` inside `window` with `#F ≤ v`. Subsets are enumerated in
/// Gray-code order, split into blocks by their top bits.
pub fn iso_set_exact(
    action: &dyn GroupAction,
    window: &[Point],
    s: &[Word],
    v_max: usize,
    exec: Execution,
) -> Result<ProfileTable> {
    let mut window = window.to_vec();
    window.sort();
    window.dedup();
    let n = window.len();
    if n == 0 || v_max == 0 {
        return Err(Error::Domain("window and v_max must be non-empty".into()));
    }
    if n > MAX_WINDOW || v_max > MAX_EXACT_V {
        return Err(Error::Capacity(format!(
            "exact search is capped at {MAX_WINDOW} window points and v ≤ {MAX_EXACT_V} (got {n} and {v_max})"
        )));
    }
    let mut index: HashMap<Point, u32> = window
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let mut images = vec![Vec::with_capacity(s.len()); n];
    for (i, x) in window.iter().enumerate() {
        for g in s {
            let y = act(action, x, g)?;
            let next = index.len() as u32;
            images[i].push(*index.entry(y).or_insert(next));
        }
    }
    let universe = index.len();

    let top = n.min(8);
    let low = n - top;
    let blocks = 1u64 << top;
    let search = |range: std::ops::Range<u64>| -> Best {
        let mut best: Best = vec![None; v_max + 1];
        let mut st = BoundaryState::new(&images, n, universe);
        for block in range {
            let prefix = (block as u32) << low;
            if prefix.count_ones() as usize > v_max {
                continue;
            }
            while st.mask != 0 {
                st.remove(st.mask.trailing_zeros() as usize);
            }
            for i in (low..n).filter(|&i| prefix & (1 << i) != 0) {
                st.insert(i);
            }
            let mut record = |st: &BoundaryState| {
                let size = st.mask.count_ones() as usize;
                if (1..=v_max).contains(&size) && better((st.boundary, st.mask), best[size]) {
                    best[size] = Some((st.boundary, st.mask));
                }
            };
            record(&st);
            for k in 1..(1u64 << low) {
                st.toggle(k.trailing_zeros() as usize);
                record(&st);
            }
        }
        best
    };
    let best = chunked_reduce(exec, blocks, 1, search, vec![None; v_max + 1], merge);

    let mut rows = Vec::with_capacity(v_max);
    let mut running: Option<(Rational, u32)> = None;
    for (v, entry) in best.iter().enumerate().skip(1) {
        if let Some((b, mask)) = *entry {
            let r = rational::ratio(b as i64, v as i64);
            let replace = match &running {
                None => true,
                Some((cur, m)) => r < *cur || (r == *cur && lex_cmp(mask, *m) == Ordering::Less),
            };
            if replace {
                running = Some((r, mask));
            }
        }
        if let Some((r, mask)) = &running {
            let points: Vec<Point> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| window[i].clone())
                .collect();
            rows.push(ProfileRow {
                v,
                ratio: r.clone(),
                witness: render_set(&points),
                points: Some(points),
            });
        }
    }
    let window_desc = format!("{} points {}..{}", n, window[0], window[n - 1]);
    Ok(ProfileTable {
        mode: ProfileMode::Exact {
            window: window_desc,
            window_size: n,
        },
        generators: s.iter().map(|g| g.render(action)).collect(),
        rows,
    })
}

/// Rows `(size F_n, running minimum of the ratio)` for `n = 1..=n_max`.
pub fn iso_family_upper<F: Field>(
    kind: Family,
    n_max: usize,
    s: &[Word],
    action: &dyn GroupAction,
    field: &F,
) -> Result<ProfileTable> {
    let mut rows: Vec<ProfileRow> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let member = family_generate(kind, n, field)?;
        let (ratio, points) = match &member {
            FamilyMember::Set(f) => (set_report(f, s, action)?.union_ratio, Some(f.clone())),
            FamilyMember::Span(f) => (
                subspace_report(f, &words_as_multipliers(s), action)?.union_ratio,
                None,
            ),
        };
        let v = member.size();
        if rows.last().is_some_and(|r| r.v >= v) {
            return Err(Error::Domain(format!(
                "family {kind} does not grow at n = {n}"
            )));
        }
        let row = match rows.last() {
            Some(prev) if prev.ratio <= ratio => ProfileRow { v, ..prev.clone() },
            _ => ProfileRow {
                v,
                ratio,
                witness: format!("{kind}({n})"),
                points,
            },
        };
        rows.push(row);
    }
    Ok(ProfileTable {
        mode: ProfileMode::FamilyUpperBound {
            family: kind.to_string(),
        },
        generators: s.iter().map(|g| g.render(action)).collect(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phi {
    Value(usize),
    /// No tabulated `v` reaches the threshold.
    Unbounded,
}

/// Least tabulated `v` with `I(v) ≤ 1/n`.
pub fn phi_from_table(table: &ProfileTable, n: u64) -> Phi {
    let threshold = rational::ratio(1, n.max(1) as i64);
    table
        .rows
        .iter()
        .find(|r| r.ratio <= threshold)
        .map_or(Phi::Unbounded, |r| Phi::Value(r.v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleVsSet {
    #[serde(with = "rational::text")]
    pub set_ratio: Rational,
    #[serde(with = "rational::text")]
    pub subspace_ratio: Rational,
    pub subspace_le_set: bool,
}

/// Boundary ratio of `F'` against that of `K F'`.
pub fn compare_module_vs_set<F: Field>(
    points: &[Point],
    s: &[Word],
    action: &dyn GroupAction,
    field: &F,
) -> Result<ModuleVsSet> {
    let set_ratio = set_report(points, s, action)?.union_ratio;
    let span = set_to_subspace(points, field)?;
    let subspace_ratio = subspace_report(&span, &words_as_multipliers(s), action)?.union_ratio;
    if subspace_ratio > set_ratio {
        return Err(Error::Internal(format!(
            "subspace ratio {subspace_ratio} exceeds set ratio {set_ratio}"
        )));
    }
    Ok(ModuleVsSet {
        subspace_le_set: true,
        set_ratio,
        subspace_ratio,
    })
}

impl ModuleVsSet {
    pub fn is_trivial(&self) -> bool {
        self.set_ratio.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{
        ball, generator_words, FreeGroup, Lamplighter, Lattice, PermutationAction,
    };
    use crate::linalg::{PrimeField, Rationals};
    use crate::rational::ratio;

    fn z_window(r: i64) -> Vec<Point> {
        (-r..=r).map(Point::Int).collect()
    }

    #[test]
    fn lex_order() {
        assert_eq!(lex_cmp(0b011, 0b101), Ordering::Less);
        assert_eq!(lex_cmp(0b001, 0b011), Ordering::Less);
        assert_eq!(lex_cmp(0b110, 0b001), Ordering::Greater);
        assert_eq!(lex_cmp(0b101, 0b100), Ordering::Less);
        assert_eq!(lex_cmp(1 << 31, 1 << 30), Ordering::Greater);
    }

    #[test]
    fn integer_window() {
        let z = Lattice::integers();
        let s = generator_words(&z);
        let t = iso_set_exact(&z, &z_window(6), &s, 8, Execution::Sequential).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.rows[0].ratio, ratio(2, 1));
        assert_eq!(t.rows[2].ratio, ratio(2, 3));
        assert_eq!(t.rows[2].witness, "{-6,-5,-4}");
        assert!(t.is_nonincreasing());
        for row in &t.rows {
            assert_eq!(
                set_report(row.points.as_ref().unwrap(), &s, &z)
                    .unwrap()
                    .union_ratio,
                row.ratio
            );
        }
        assert_eq!(
            t,
            iso_set_exact(&z, &z_window(6), &s, 8, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn caps() {
        let z = Lattice::integers();
        let s = generator_words(&z);
        assert!(matches!(
            iso_set_exact(&z, &z_window(12), &s, 4, Execution::Sequential),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            iso_set_exact(&z, &z_window(3), &s, 13, Execution::Sequential),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn free_group_ball() {
        let f2 = FreeGroup::new(2).unwrap();
        let w = ball(&f2, &f2.base_point(), 2, 64).unwrap();
        assert_eq!(w.len(), 17);
        let t = iso_set_exact(&f2, &w, &generator_words(&f2), 6, Execution::Parallel).unwrap();
        assert!(t.rows.iter().all(|r| r.ratio >= ratio(2, 1)));
    }

    #[test]
    fn fixed_points_do_not_count() {
        let p = PermutationAction::new("c3", 4, vec![("r".into(), vec![1, 2, 0, 3])]).unwrap();
        let t = iso_set_exact(
            &p,
            &p.points(),
            &generator_words(&p),
            4,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(t.rows[0].ratio, Rational::zero());
        assert_eq!(t.rows[0].witness, "{3}");
    }

    #[test]
    fn families_and_phi() {
        let lg = Lamplighter::new();
        let s = Family::LampBox.default_generators();
        let boxes = iso_family_upper(Family::LampBox, 10, &s, &lg, &Rationals).unwrap();
        for (n, row) in boxes.rows.iter().enumerate().map(|(i, r)| (i + 1, r)) {
            assert_eq!((row.v, row.ratio.clone()), (n << n, ratio(2, n as i64)));
        }
        assert_eq!(phi_from_table(&boxes, 5), Phi::Value(10 << 10));
        assert_eq!(phi_from_table(&boxes, 6), Phi::Unbounded);

        let g2 = PrimeField::new(2).unwrap();
        let spans = iso_family_upper(Family::LampSpan, 12, &s, &lg, &g2).unwrap();
        for (n, row) in spans.rows.iter().enumerate().map(|(i, r)| (i + 1, r)) {
            assert_eq!((row.v, row.ratio.clone()), (n, ratio(2, n as i64)));
        }
        assert_eq!(phi_from_table(&spans, 5), Phi::Value(10));

        let z = Lattice::integers();
        let ints =
            iso_family_upper(Family::ZInterval, 12, &generator_words(&z), &z, &Rationals).unwrap();
        assert_eq!(phi_from_table(&ints, 5), Phi::Value(10));
    }

    #[test]
    fn module_vs_set() {
        let z = Lattice::integers();
        let r = compare_module_vs_set(&z_window(3), &generator_words(&z), &z, &Rationals).unwrap();
        assert_eq!(
            (r.set_ratio.clone(), r.subspace_ratio.clone()),
            (ratio(2, 7), ratio(2, 7))
        );
        let lg = Lamplighter::new();
        let FamilyMember::Set(b) = family_generate(Family::LampBox, 3, &Rationals).unwrap() else {
            panic!()
        };
        let r = compare_module_vs_set(
            &b,
            &Family::LampBox.default_generators(),
            &lg,
            &PrimeField::new(2).unwrap(),
        )
        .unwrap();
        assert!(r.subspace_ratio <= ratio(2, 3) && r.subspace_le_set);
        let p = PermutationAction::new("c3", 3, vec![("r".into(), vec![1, 2, 0])]).unwrap();
        let r = compare_module_vs_set(&p.points(), &generator_words(&p), &p, &Rationals).unwrap();
        assert!(r.is_trivial() && r.subspace_ratio.is_zero());
    }
}
