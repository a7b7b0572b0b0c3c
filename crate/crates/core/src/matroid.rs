//! The coordinate matroid of a subspace: `S` is a basis iff the projection
//! `π_S` maps `F` isomorphically onto `K^S`, i.e. the columns of the basis
//! matrix indexed by `S` form a basis of `K^d`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Point;
use crate::linalg::echelon::{self, IncrementalBasis};
use crate::linalg::{Field, LabeledSubspace};

/// Independent-set tables are only built up to this many entries.
const TABLE_CAP: u128 = 1 << 16;

/// A sorted set of labels of size `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisSet(pub Vec<Point>);

impl BasisSet {
    pub fn new(mut labels: Vec<Point>) -> Self {
        labels.sort();
        labels.dedup();
        BasisSet(labels)
    }

    pub fn labels(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &BasisSet) -> bool {
        self.0.iter().all(|p| other.contains(p))
    }

    /// `S \ {out} ∪ {into}`.
    pub fn swap(&self, out: &Point, into: &Point) -> BasisSet {
        BasisSet::new(
            self.0
                .iter()
                .filter(|p| *p != out)
                .cloned()
                .chain([into.clone()])
                .collect(),
        )
    }
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Point::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Column matroid of a [`LabeledSubspace`], with the columns cached for the
/// greedy hot loop. When the matroid is small, every independent set is
/// precomputed as a bitmask.
#[derive(Debug, Clone)]
pub struct SubspaceMatroid<F: Field> {
    space: LabeledSubspace<F>,
    columns: Vec<Vec<F::Elem>>,
    table: Option<HashSet<u64>>,
}

/// Reusable buffers for repeated greedy calls on one matroid.
#[derive(Debug, Clone)]
pub struct GreedyScratch<F: Field> {
    order: Vec<usize>,
    basis: IncrementalBasis<F>,
}

impl<F: Field> SubspaceMatroid<F> {
    pub fn new(space: LabeledSubspace<F>) -> Self {
        let columns: Vec<Vec<F::Elem>> =
            (0..space.ambient_dim()).map(|j| space.column(j)).collect();
        let table = build_table(space.field(), &columns, space.dim());
        SubspaceMatroid {
            space,
            columns,
            table,
        }
    }

    pub fn space(&self) -> &LabeledSubspace<F> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.space.dim()
    }

    pub fn labels(&self) -> &[Point] {
        self.space.labels()
    }

    pub fn ground_size(&self) -> usize {
        self.columns.len()
    }

    pub fn scratch(&self) -> GreedyScratch<F> {
        GreedyScratch {
            order: Vec::with_capacity(self.columns.len()),
            basis: IncrementalBasis::new(self.space.field().clone()),
        }
    }

    fn indices(&self, labels: &[Point]) -> Result<Vec<usize>> {
        self.space.indices_of(labels)
    }

    pub fn basis_from_indices(&self, idx: &[usize]) -> BasisSet {
        BasisSet::new(idx.iter().map(|&j| self.labels()[j].clone()).collect())
    }

    /// Whether the columns indexed by `s` are linearly independent.
    pub fn is_independent(&self, s: &[Point]) -> Result<bool> {
        let mut idx = self.indices(s)?;
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != s.len() || idx.len() > self.rank() {
            return Ok(false);
        }
        Ok(self.indices_independent(&idx))
    }

    fn indices_independent(&self, idx: &[usize]) -> bool {
        if let Some(table) = &self.table {
            return table.contains(&idx.iter().fold(0u64, |m, &j| m | 1 << j));
        }
        self.space.column_rank(idx) == idx.len()
    }

    /// `S ∈ X_F`.
    pub fn is_basis(&self, s: &BasisSet) -> Result<bool> {
        Ok(s.len() == self.rank() && self.is_independent(s.labels())?)
    }

    /// The pivot columns of the echelon basis.
    pub fn initial_basis(&self) -> BasisSet {
        self.basis_from_indices(self.space.pivots())
    }

    /// Minimum-weight basis by the matroid greedy algorithm; ties are broken
    /// by label order.
    pub fn greedy_min_basis(&self, weights: &[f64]) -> Result<BasisSet> {
        if weights.len() != self.ground_size() {
            return Err(Error::Shape(format!(
                "{} weights for {} labels",
                weights.len(),
                self.ground_size()
            )));
        }
        let mut scratch = self.scratch();
        Ok(self.basis_from_indices(&self.greedy_indices(weights, &mut scratch)))
    }

    /// Greedy basis as sorted column indices.
    pub fn greedy_indices(&self, weights: &[f64], scratch: &mut GreedyScratch<F>) -> Vec<usize> {
        let d = self.rank();
        let order = &mut scratch.order;
        order.clear();
        order.extend(0..self.columns.len());
        order.sort_unstable_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
        let mut chosen = Vec::with_capacity(d);
        match &self.table {
            Some(table) => {
                let mut mask = 0u64;
                for &j in order.iter() {
                    if chosen.len() == d {
                        break;
                    }
                    if table.contains(&(mask | 1 << j)) {
                        mask |= 1 << j;
                        chosen.push(j);
                    }
                }
            }
            None => {
                scratch.basis.clear();
                for &j in order.iter() {
                    if chosen.len() == d {
                        break;
                    }
                    if scratch.basis.insert(&self.columns[j]) {
                        chosen.push(j);
                    }
                }
            }
        }
        chosen.sort_unstable();
        chosen
    }

    /// All bases in lexicographic order of their label indices; more than
    /// `cap` bases is a capacity error.
    pub fn enumerate_bases(&self, cap: usize) -> Result<Vec<BasisSet>> {
        Ok(self
            .enumerate_base_indices(cap)?
            .iter()
            .map(|b| self.basis_from_indices(b))
            .collect())
    }

    pub fn enumerate_base_indices(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if cap == 0 {
            return Err(Error::Capacity("cap must be positive".into()));
        }
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        let basis = IncrementalBasis::new(self.space.field().clone());
        self.extend_bases(&mut prefix, basis, 0, cap, &mut out)?;
        Ok(out)
    }

    fn extend_bases(
        &self,
        prefix: &mut Vec<usize>,
        basis: IncrementalBasis<F>,
        start: usize,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let d = self.rank();
        if prefix.len() == d {
            if out.len() == cap {
                return Err(Error::Capacity(format!("more than {cap} bases")));
            }
            out.push(prefix.clone());
            return Ok(());
        }
        let n = self.columns.len();
        for j in start..n {
            if n - j < d - prefix.len() {
                break;
            }
            let mut next = basis.clone();
            if next.insert(&self.columns[j]) {
                prefix.push(j);
                self.extend_bases(prefix, next, j + 1, cap, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    /// Rows `ψ_i` (for `i` in `s`) of the basis of `F` dual to the coordinates
    /// in `s`: `ψ_i[j] = δ_ij` for `i, j ∈ s`.
    fn dual_basis(&self, s: &[usize]) -> Option<Vec<Vec<F::Elem>>> {
        let field = self.space.field();
        let sub: Vec<Vec<F::Elem>> = self
            .space
            .rows()
            .iter()
            .map(|r| s.iter().map(|&j| r[j].clone()).collect())
            .collect();
        let inv = echelon::invert(field, &sub)?;
        Some(echelon::mat_mul(
            field,
            &inv,
            self.space.rows(),
            self.ground_size(),
        ))
    }
}

fn build_table<F: Field>(field: &F, columns: &[Vec<F::Elem>], d: usize) -> Option<HashSet<u64>> {
    let n = columns.len();
    if n > 64 {
        return None;
    }
    let mut bound: u128 = 0;
    let mut binom: u128 = 1;
    for k in 0..=d {
        bound += binom;
        if bound > TABLE_CAP {
            return None;
        }
        binom = binom * (n - k) as u128 / (k + 1) as u128;
    }
    let mut table = HashSet::new();
    fn visit<F: Field>(
        columns: &[Vec<F::Elem>],
        d: usize,
        mask: u64,
        basis: &IncrementalBasis<F>,
        start: usize,
        table: &mut HashSet<u64>,
    ) {
        table.insert(mask);
        if basis.len() == d {
            return;
        }
        for j in start..columns.len() {
            let mut next = basis.clone();
            if next.insert(&columns[j]) {
                visit(columns, d, mask | 1 << j, &next, j + 1, table);
            }
        }
    }
    visit(
        columns,
        d,
        0,
        &IncrementalBasis::new(field.clone()),
        0,
        &mut table,
    );
    Some(table)
}

fn check_nested<F: Field>(e: &SubspaceMatroid<F>, f: &SubspaceMatroid<F>) -> Result<()> {
    if !f.space.contains(&e.space)? {
        return Err(Error::Containment("E is not a subspace of F".into()));
    }
    Ok(())
}

fn require_basis<F: Field>(m: &SubspaceMatroid<F>, s: &BasisSet, which: &str) -> Result<()> {
    let ok = s.labels().iter().all(|p| m.space.label_index(p).is_some()) && m.is_basis(s)?;
    if !ok {
        return Err(Error::InvalidBasis(format!(
            "{s} is not a basis of {which}"
        )));
    }
    Ok(())
}

/// Extends `S ∈ X_E` to some `T ∈ X_F` with `S ⊆ T`, for `E ≤ F`:
/// `T = S ⊔ pivots(ker π_S ∩ F)`.
pub fn basis_extend<F: Field>(
    e: &SubspaceMatroid<F>,
    f: &SubspaceMatroid<F>,
    s: &BasisSet,
) -> Result<BasisSet> {
    check_nested(e, f)?;
    require_basis(e, s, "E")?;
    let field = f.space.field();
    let s_idx = f.indices(s.labels())?;
    let rows = f.space.rows();
    // coefficient vectors c with (Σ c_i R_i)|_S = 0
    let system: Vec<Vec<F::Elem>> = s_idx
        .iter()
        .map(|&j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let coefs = echelon::kernel(field, system, rows.len());
    let d_rows = echelon::mat_mul(field, &coefs, rows, f.ground_size());
    let d = echelon::rref_with_width(field, d_rows, f.ground_size());
    let mut t = s.labels().to_vec();
    t.extend(d.pivots.iter().map(|&j| f.labels()[j].clone()));
    let t = BasisSet::new(t);
    if !f.is_basis(&t)? || !s.is_subset(&t) {
        return Err(Error::Internal(format!(
            "extension {t} of {s} is not a basis of F"
        )));
    }
    Ok(t)
}

/// Restricts `T ∈ X_F` to some `S ∈ X_E` with `S ⊆ T`, via the pivots of `π_T(E)`.
pub fn basis_restrict<F: Field>(
    e: &SubspaceMatroid<F>,
    f: &SubspaceMatroid<F>,
    t: &BasisSet,
) -> Result<BasisSet> {
    check_nested(e, f)?;
    require_basis(f, t, "F")?;
    let proj = e.space.extend_labels(t.labels()).project(t.labels())?;
    let s = BasisSet::new(
        proj.pivots()
            .iter()
            .map(|&j| proj.labels()[j].clone())
            .collect(),
    );
    let s_in_e = s.labels().iter().all(|p| e.space.label_index(p).is_some());
    if !s_in_e || !e.is_basis(&s)? || !s.is_subset(t) {
        return Err(Error::Internal(format!(
            "restriction {s} of {t} is not a basis of E"
        )));
    }
    Ok(s)
}

/// Given `S ∈ X_E`, `T ∈ X_F` and `k ∈ S`, returns the smallest `ℓ ∈ T` with
/// `ε_k[ℓ]·φ_ℓ[k] ≠ 0` for the dual bases `ε` of `E` on `S` and `φ` of `F` on
/// `T`; then `S - k + ℓ ∈ X_E` and `T - ℓ + k ∈ X_F`.
pub fn basis_exchange<F: Field>(
    e: &SubspaceMatroid<F>,
    f: &SubspaceMatroid<F>,
    s: &BasisSet,
    t: &BasisSet,
    k: &Point,
) -> Result<Point> {
    check_nested(e, f)?;
    require_basis(e, s, "E")?;
    require_basis(f, t, "F")?;
    if !s.contains(k) {
        return Err(Error::Domain(format!("{k} is not in {s}")));
    }
    // common ambient so both dual bases are indexed alike
    let ee = SubspaceMatroid::new(e.space.extend_labels(f.labels()));
    let ff = SubspaceMatroid::new(f.space.extend_labels(e.labels()));
    let field = ee.space.field();
    let s_idx = ee.indices(s.labels())?;
    let t_idx = ff.indices(t.labels())?;
    let k_idx = ee.indices(std::slice::from_ref(k))?[0];
    let eps = ee
        .dual_basis(&s_idx)
        .ok_or_else(|| Error::Internal(format!("{s} is singular for E")))?;
    let phi = ff
        .dual_basis(&t_idx)
        .ok_or_else(|| Error::Internal(format!("{t} is singular for F")))?;
    let eps_k = &eps[s_idx.iter().position(|&j| j == k_idx).expect("k in S")];
    for (pos, &l_idx) in t_idx.iter().enumerate() {
        if field.is_zero(&eps_k[l_idx]) || field.is_zero(&phi[pos][k_idx]) {
            continue;
        }
        let l = ee.labels()[l_idx].clone();
        if ee.is_basis(&s.swap(k, &l))? && ff.is_basis(&t.swap(&l, k))? {
            return Ok(l);
        }
        return Err(Error::Internal(format!(
            "exchange {k} <-> {l} fails verification"
        )));
    }
    Err(Error::Internal(format!(
        "no exchange partner for {k} in {t}"
    )))
}
