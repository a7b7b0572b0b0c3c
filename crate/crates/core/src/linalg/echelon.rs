//! Gauss-Jordan elimination and the kernels built on it.

use crate::error::{Error, Result};
use crate::linalg::field::Field;

/// A matrix in reduced row-echelon form: no zero rows, pivot columns
/// strictly increasing, each pivot equal to one and alone in its column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form of `matrix`. Ragged input is a shape error.
pub fn rref<F: Field>(field: &F, matrix: Vec<Vec<F::Elem>>) -> Result<Echelon<F::Elem>> {
    let ncols = matrix.first().map_or(0, Vec::len);
    if let Some(bad) = matrix.iter().position(|r| r.len() != ncols) {
        return Err(Error::Shape(format!(
            "row {bad} has {} entries, expected {ncols}",
            matrix[bad].len()
        )));
    }
    Ok(rref_with_width(field, matrix, ncols))
}

/// As [`rref`] with the width given explicitly; rows must have `ncols` entries.
pub fn rref_with_width<F: Field>(
    field: &F,
    mut rows: Vec<Vec<F::Elem>>,
    ncols: usize,
) -> Echelon<F::Elem> {
    rows.retain(|r| r.iter().any(|x| !field.is_zero(x)));
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == m {
            break;
        }
        let Some(r) = (rank..m).find(|&r| !field.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(r, rank);
        let mut pivot_row = std::mem::take(&mut rows[rank]);
        let inv = field.inv(&pivot_row[c]);
        field.scale(&mut pivot_row, &inv, c);
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !field.is_zero(&row[c]) {
                let coef = row[c].clone();
                field.axpy_neg(row, &pivot_row, &coef, c);
            }
        }
        rows[rank] = pivot_row;
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    Echelon {
        rows,
        pivots,
        ncols,
    }
}

/// Basis of `{x : A x = 0}` for the `ncols`-column matrix `a`, one vector per
/// free column of its echelon form.
pub fn kernel<F: Field>(field: &F, a: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<Vec<F::Elem>> {
    let e = rref_with_width(field, a, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut x = vec![field.zero(); ncols];
            x[j] = field.one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                x[p] = field.neg(&row[j]);
            }
            x
        })
        .collect()
}

pub fn transpose<E: Clone>(rows: &[Vec<E>], ncols: usize) -> Vec<Vec<E>> {
    (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert<F: Field>(field: &F, a: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<Vec<F::Elem>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            row
        })
        .collect();
    let e = rref_with_width(field, aug, 2 * n);
    if e.rank() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(
    field: &F,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
    bcols: usize,
) -> Vec<Vec<F::Elem>> {
    a.iter()
        .map(|row| {
            let mut out = vec![field.zero(); bcols];
            for (k, x) in row.iter().enumerate() {
                if !field.is_zero(x) {
                    for (o, y) in out.iter_mut().zip(&b[k]) {
                        *o = field.add(o, &field.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

/// Row-reduced set of vectors that grows one vector at a time; `insert`
/// reports whether the new vector enlarged the span.
#[derive(Debug, Clone)]
pub struct IncrementalBasis<F: Field> {
    field: F,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> IncrementalBasis<F> {
    pub fn new(field: F) -> Self {
        IncrementalBasis {
            field,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn clear(&mut self) {
        self.rows.clear();
    }

    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = &self.field;
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !f.is_zero(&w[*p]) {
                let c = w[*p].clone();
                f.axpy_neg(&mut w, row, &c, 0);
            }
        }
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]);
        f.scale(&mut w, &inv, 0);
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use crate::rational::from_int;

    fn q(rows: &[&[i64]]) -> Vec<Vec<crate::rational::Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| from_int(x)).collect())
            .collect()
    }

    #[test]
    fn identity_is_fixed() {
        let e = rref(&Rationals, q(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(e.rows, q(&[&[1, 0], &[0, 1]]));
        assert_eq!((e.rank(), e.pivots.clone()), (2, vec![0, 1]));
    }

    #[test]
    fn duplicate_rows_gf2() {
        let f = PrimeField::new(2).unwrap();
        let e = rref(&f, vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(e.rows, vec![vec![1, 1]]);
        assert_eq!(e.pivots, vec![0]);
    }

    #[test]
    fn proportional_rows_q() {
        let e = rref(&Rationals, q(&[&[2, 4], &[1, 2]])).unwrap();
        assert_eq!(e.rows, q(&[&[1, 2]]));
        assert_eq!((e.rank(), e.pivots), (1, vec![0]));
    }

    #[test]
    fn ragged_is_shape_error() {
        assert!(matches!(
            rref(&Rationals, q(&[&[1, 2], &[1]])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn kernel_and_inverse() {
        let a = q(&[&[1, 0, 1], &[0, 1, 1]]);
        let k = kernel(&Rationals, a.clone(), 3);
        assert_eq!(k, q(&[&[-1, -1, 1]]));
        let m = q(&[&[0, 1], &[1, 1]]);
        let inv = invert(&Rationals, &m).unwrap();
        assert_eq!(mat_mul(&Rationals, &m, &inv, 2), q(&[&[1, 0], &[0, 1]]));
        assert!(invert(&Rationals, &q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn incremental() {
        let f = PrimeField::new(2).unwrap();
        let mut b = IncrementalBasis::new(f);
        assert!(b.insert(&[1, 1, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[1, 0, 1]));
        assert!(!b.insert(&[0, 0, 0]));
        assert!(b.insert(&[0, 0, 1]));
        assert_eq!(b.len(), 3);
    }
}
