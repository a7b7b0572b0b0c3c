use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{act, GroupAction, Point, Word};
use crate::linalg::combination::{FormalCombination, Multiplier};
use crate::linalg::echelon::{self, rref_with_width};
use crate::linalg::field::{Field, FieldSpec};

/// A finite-dimensional subspace `F ≤ K^X`, stored canonically: labels in
/// increasing point order and the basis in reduced row-echelon form, so two
/// subspaces over the same labels are equal iff their data is identical.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSubspace<F: Field> {
    field: F,
    labels: Vec<Point>,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> LabeledSubspace<F> {
    /// Span of `rows`, whose columns are indexed by `labels` (any order, distinct).
    pub fn from_rows(field: F, labels: Vec<Point>, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = labels.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "row of length {} against {n} labels",
                r.len()
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        if let Some(w) = order.windows(2).find(|w| labels[w[0]] == labels[w[1]]) {
            return Err(Error::Domain(format!("duplicate label {}", labels[w[0]])));
        }
        let sorted_labels: Vec<Point> = order.iter().map(|&i| labels[i].clone()).collect();
        let permuted: Vec<Vec<F::Elem>> = rows
            .into_iter()
            .map(|r| order.iter().map(|&i| r[i].clone()).collect())
            .collect();
        Ok(Self::from_sorted(field, sorted_labels, permuted))
    }

    /// Labels must already be strictly increasing.
    fn from_sorted(field: F, labels: Vec<Point>, rows: Vec<Vec<F::Elem>>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let e = rref_with_width(&field, rows, labels.len());
        LabeledSubspace {
            field,
            labels,
            rows: e.rows,
            pivots: e.pivots,
        }
    }

    /// Span of finitely supported vectors; the labels are the union of supports.
    pub fn from_sparse(field: F, vectors: &[BTreeMap<Point, F::Elem>]) -> Self {
        let labels: BTreeSet<Point> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
        Self::from_sparse_on(field, labels.into_iter().collect(), vectors)
    }

    fn from_sparse_on(field: F, labels: Vec<Point>, vectors: &[BTreeMap<Point, F::Elem>]) -> Self {
        let rows = vectors
            .iter()
            .map(|v| {
                let mut row = vec![field.zero(); labels.len()];
                for (p, x) in v {
                    let i = labels.binary_search(p).expect("support inside labels");
                    row[i] = field.add(&row[i], x);
                }
                row
            })
            .collect();
        Self::from_sorted(field, labels, rows)
    }

    /// `K F'`: the span of the basis vectors at the given points.
    pub fn coordinate_span(field: F, points: &[Point]) -> Result<Self> {
        let n = points.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Self::from_rows(field, points.to_vec(), rows)
    }

    pub fn zero(field: F, labels: Vec<Point>) -> Result<Self> {
        Self::from_rows(field, labels, Vec::new())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn labels(&self) -> &[Point] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label_index(&self, p: &Point) -> Option<usize> {
        self.labels.binary_search(p).ok()
    }

    /// Column `j` of the basis matrix, a vector of length `dim`.
    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    /// Labels of columns that are not identically zero.
    pub fn support(&self) -> Vec<Point> {
        (0..self.labels.len())
            .filter(|&j| self.rows.iter().any(|r| !self.field.is_zero(&r[j])))
            .map(|j| self.labels[j].clone())
            .collect()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                other.field.spec().to_string(),
            ));
        }
        Ok(())
    }

    /// The same subspace over the union of its labels and `extra`, zero-padded.
    pub fn extend_labels(&self, extra: &[Point]) -> Self {
        let all: BTreeSet<&Point> = self.labels.iter().chain(extra).collect();
        if all.len() == self.labels.len() {
            return self.clone();
        }
        let labels: Vec<Point> = all.into_iter().cloned().collect();
        let pos: Vec<usize> = self
            .labels
            .iter()
            .map(|p| labels.binary_search(p).expect("label kept"))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![self.field.zero(); labels.len()];
                for (x, &j) in r.iter().zip(&pos) {
                    row[j] = x.clone();
                }
                row
            })
            .collect();
        let pivots = self.pivots.iter().map(|&p| pos[p]).collect();
        LabeledSubspace {
            field: self.field.clone(),
            labels,
            rows,
            pivots,
        }
    }

    /// `E + F`, over the union of the label sets.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let a = self.extend_labels(&other.labels);
        let b = other.extend_labels(&self.labels);
        let rows = a.rows.into_iter().chain(b.rows).collect();
        Ok(Self::from_sorted(self.field.clone(), a.labels, rows))
    }

    /// `dim((F + G)/F) = dim(F + G) - dim F`.
    pub fn quotient_dim(&self, other: &Self) -> Result<usize> {
        Ok(self.sum(other)?.dim() - self.dim())
    }

    /// Reduces `v` (indexed by this subspace's labels) against the basis; the
    /// result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&w[p]) {
                let c = w[p].clone();
                self.field.axpy_neg(&mut w, row, &c, 0);
            }
        }
        w
    }

    /// Whether `other ≤ self`: every row of `other` reduces to zero.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_field(other)?;
        let pos: Vec<Option<usize>> = other.labels.iter().map(|p| self.label_index(p)).collect();
        for r in &other.rows {
            let mut v = vec![self.field.zero(); self.labels.len()];
            for (x, j) in r.iter().zip(&pos) {
                match j {
                    Some(j) => v[*j] = x.clone(),
                    None if !self.field.is_zero(x) => return Ok(false),
                    None => {}
                }
            }
            if self.reduce(&v).iter().any(|x| !self.field.is_zero(x)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `E ∩ F`, computed from the kernel of `[A; -B]ᵀ`.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let a = self.extend_labels(&other.labels);
        let b = other.extend_labels(&self.labels);
        let n = a.labels.len();
        let (da, db) = (a.dim(), b.dim());
        let stacked: Vec<Vec<F::Elem>> = a
            .rows
            .iter()
            .cloned()
            .chain(
                b.rows
                    .iter()
                    .map(|r| r.iter().map(|x| self.field.neg(x)).collect()),
            )
            .collect();
        let system = echelon::transpose(&stacked, n);
        let ker = echelon::kernel(&self.field, system, da + db);
        let vecs = ker
            .iter()
            .map(|z| combine(&self.field, &z[..da], &a.rows, n))
            .collect();
        Ok(Self::from_sorted(self.field.clone(), a.labels, vecs))
    }

    /// `π_T(F)` as a subspace of `K^T`.
    pub fn project(&self, labels: &[Point]) -> Result<Self> {
        let idx = self.indices_of(labels)?;
        let rows = self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
            .collect();
        Self::from_rows(self.field.clone(), labels.to_vec(), rows)
    }

    pub fn indices_of(&self, labels: &[Point]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|p| {
                self.label_index(p)
                    .ok_or_else(|| Error::Domain(format!("label {p} not in subspace labels")))
            })
            .collect()
    }

    /// Rank of the columns at the given indices.
    pub fn column_rank(&self, idx: &[usize]) -> usize {
        let rows = self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
            .collect();
        rref_with_width(&self.field, rows, idx.len()).rank()
    }

    /// Pushes every label through `map`, which must be injective on the labels.
    pub fn map_labels(&self, mut map: impl FnMut(&Point) -> Result<Point>) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .map(&mut map)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(self.field.clone(), labels, self.rows.clone())
    }

    /// `F·g` for a group element: the relabelling `x ↦ x·g`.
    pub fn act(&self, action: &dyn GroupAction, g: &Word) -> Result<Self> {
        self.map_labels(|x| act(action, x, g))
    }

    /// `F·r` for `r = Σ c_g g`: each basis vector `Σ v_x x` maps to
    /// `Σ_x Σ_g v_x c_g (x·g)`, and the images are recanonicalized.
    pub fn act_combination(
        &self,
        action: &dyn GroupAction,
        r: &FormalCombination<F>,
    ) -> Result<Self> {
        let f = &self.field;
        let mut images: Vec<Vec<Point>> = Vec::with_capacity(r.len());
        for (w, _) in r.terms() {
            images.push(
                self.labels
                    .iter()
                    .map(|x| act(action, x, w))
                    .collect::<Result<_>>()?,
            );
        }
        let coefs: Vec<&F::Elem> = r.terms().map(|(_, c)| c).collect();
        let vectors: Vec<BTreeMap<Point, F::Elem>> = self
            .rows
            .iter()
            .map(|row| {
                let mut v: BTreeMap<Point, F::Elem> = BTreeMap::new();
                for (j, x) in row.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    for (img, c) in images.iter().zip(&coefs) {
                        let e = v.entry(img[j].clone()).or_insert_with(|| f.zero());
                        *e = f.add(e, &f.mul(x, c));
                    }
                }
                v
            })
            .collect();
        let labels: BTreeSet<Point> = images.into_iter().flatten().collect();
        Ok(Self::from_sparse_on(
            f.clone(),
            labels.into_iter().collect(),
            &vectors,
        ))
    }

    pub fn apply(&self, action: &dyn GroupAction, m: &Multiplier<F>) -> Result<Self> {
        match m {
            Multiplier::Element(w) => self.act(action, w),
            Multiplier::Combination(c) => self.act_combination(action, c),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": {"char": self.field.spec().characteristic},
            "labels": self.labels,
            "rows": self.rows.iter().map(|r| r.iter().map(|x| self.field.to_json(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"field": {"char": p}, "labels": [...], "rows": [[...]]}`; the
    /// characteristic must match `field`.
    pub fn from_json(field: F, value: &Value) -> Result<Self> {
        let spec = read_field_spec(value)?;
        if spec != field.spec() {
            return Err(Error::FieldMismatch(
                spec.to_string(),
                field.spec().to_string(),
            ));
        }
        let labels: Vec<Point> =
            serde_json::from_value(value.get("labels").cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::Parse(format!("labels: {e}")))?;
        let rows = value
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"rows\" array".into()))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("row is not an array".into()))?
                    .iter()
                    .map(|x| field.from_json(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, labels, rows)
    }
}

/// Field characteristic from a subspace JSON document.
pub fn read_field_spec(value: &Value) -> Result<FieldSpec> {
    let c = value
        .get("field")
        .and_then(|f| f.get("char"))
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing field.char".into()))?;
    FieldSpec::new(c)
}

fn combine<F: Field>(
    field: &F,
    coefs: &[F::Elem],
    rows: &[Vec<F::Elem>],
    n: usize,
) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); n];
    for (c, r) in coefs.iter().zip(rows) {
        if !field.is_zero(c) {
            let neg = field.neg(c);
            field.axpy_neg(&mut out, r, &neg, 0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Lamplighter, Lattice};
    use crate::linalg::field::{PrimeField, Rationals};
    use crate::rational::from_int;

    fn labels(names: &[&str]) -> Vec<Point> {
        names.iter().map(|&s| Point::from(s)).collect()
    }

    fn q(rows: &[&[i64]]) -> Vec<Vec<crate::rational::Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| from_int(x)).collect())
            .collect()
    }

    #[test]
    fn construction() {
        let f = LabeledSubspace::from_rows(
            Rationals,
            labels(&["a", "b", "c"]),
            q(&[&[1, 0, 1], &[0, 1, 1]]),
        )
        .unwrap();
        assert_eq!(f.dim(), 2);
        let z = LabeledSubspace::from_rows(Rationals, labels(&["a", "b"]), q(&[&[0, 0]])).unwrap();
        assert_eq!(z.dim(), 0);
        let g2 = PrimeField::new(2).unwrap();
        let d = LabeledSubspace::from_rows(g2, labels(&["a", "b"]), vec![vec![1, 1], vec![1, 1]])
            .unwrap();
        assert_eq!(d.dim(), 1);
        assert!(matches!(
            LabeledSubspace::from_rows(Rationals, labels(&["a", "b"]), q(&[&[1, 0, 0]])),
            Err(Error::Shape(_))
        ));
        assert!(LabeledSubspace::from_rows(Rationals, labels(&["a", "a"]), q(&[&[1, 0]])).is_err());
    }

    #[test]
    fn canonical_under_label_order() {
        let a = LabeledSubspace::from_rows(Rationals, labels(&["b", "a"]), q(&[&[2, 1]])).unwrap();
        let b = LabeledSubspace::from_rows(Rationals, labels(&["a", "b"]), q(&[&[3, 6]])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sums() {
        let e = LabeledSubspace::from_rows(Rationals, labels(&["a", "b"]), q(&[&[1, 0]])).unwrap();
        let f = LabeledSubspace::from_rows(Rationals, labels(&["a", "b"]), q(&[&[0, 1]])).unwrap();
        assert_eq!(e.sum(&e).unwrap(), e);
        assert_eq!(e.sum(&f).unwrap().dim(), 2);
        assert_eq!(e.quotient_dim(&e).unwrap(), 0);
        assert_eq!(e.quotient_dim(&f).unwrap(), 1);
        let ea = LabeledSubspace::coordinate_span(Rationals, &labels(&["a"])).unwrap();
        let eb = LabeledSubspace::coordinate_span(Rationals, &labels(&["b"])).unwrap();
        let s = ea.sum(&eb).unwrap();
        assert_eq!((s.dim(), s.labels().to_vec()), (2, labels(&["a", "b"])));
        let g3 =
            LabeledSubspace::coordinate_span(PrimeField::new(3).unwrap(), &labels(&["a"])).unwrap();
        let g2 =
            LabeledSubspace::coordinate_span(PrimeField::new(2).unwrap(), &labels(&["a"])).unwrap();
        assert!(matches!(g3.sum(&g2), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn containment_and_intersection() {
        let f = LabeledSubspace::from_rows(
            Rationals,
            labels(&["a", "b", "c"]),
            q(&[&[1, 0, 1], &[0, 1, 1]]),
        )
        .unwrap();
        let e = LabeledSubspace::from_rows(Rationals, labels(&["a", "b", "c"]), q(&[&[1, 1, 2]]))
            .unwrap();
        let g = LabeledSubspace::from_rows(Rationals, labels(&["a", "b", "c"]), q(&[&[1, 0, 0]]))
            .unwrap();
        assert!(f.contains(&e).unwrap());
        assert!(!f.contains(&g).unwrap());
        let outside = LabeledSubspace::coordinate_span(Rationals, &labels(&["z"])).unwrap();
        assert!(!f.contains(&outside).unwrap());
        assert_eq!(f.intersection(&e).unwrap(), e);
        assert_eq!(f.intersection(&g).unwrap().dim(), 0);
    }

    #[test]
    fn actions() {
        let z = Lattice::integers();
        let plus = Word::parse(&z, "+1").unwrap();
        let f = LabeledSubspace::coordinate_span(Rationals, &[Point::Int(3)]).unwrap();
        assert_eq!(f.act(&z, &Word::identity()).unwrap(), f);
        let g = f.act(&z, &plus).unwrap();
        assert_eq!(g.labels(), &[Point::Int(4)]);
        assert!(f.act(&Lamplighter::new(), &Word::generator(0)).is_err());
        // (1 + t) applied to e_3 gives e_3 + e_4
        let r = FormalCombination::from_terms(
            Rationals,
            [(Word::identity(), from_int(1)), (plus, from_int(1))],
        );
        let h = f.act_combination(&z, &r).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.labels(), &[Point::Int(3), Point::Int(4)]);
        assert_eq!(h.rows(), q(&[&[1, 1]]).as_slice());
    }

    #[test]
    fn json_roundtrip() {
        let f = LabeledSubspace::from_rows(
            Rationals,
            labels(&["a", "b"]),
            vec![vec![from_int(2), crate::rational::ratio(1, 3)]],
        )
        .unwrap();
        let v = f.to_json();
        assert_eq!(v["rows"][0][1], json!("1/6"));
        assert_eq!(LabeledSubspace::from_json(Rationals, &v).unwrap(), f);
        assert!(LabeledSubspace::from_json(PrimeField::new(2).unwrap(), &v).is_err());
    }
}
