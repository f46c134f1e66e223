//! Exact rational arithmetic and linear algebra.
//!
//! Every dimension reported by this crate comes out of the routines here:
//! a dense [`Matrix`] with reduced row echelon form, kernels and particular
//! solutions, and a sparse incremental [`Echelon`] used by the per-degree
//! computations, where the matrices are large but have few nonzeros per row.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_scalar(q: &Scalar) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Returned by [`Matrix::solve`] when the right-hand side is not in the
/// column space.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("inconsistent linear system")]
pub struct Inconsistent;

/// A dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_scalar).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: nrows, cols: ncols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..a.cols {
            if pivot_row == a.rows {
                break;
            }
            let Some(found) = (pivot_row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(found, pivot_row);
            let inv = a.get(pivot_row, col).recip();
            for c in col..a.cols {
                let v = a.get(pivot_row, c) * &inv;
                a.set(pivot_row, c, v);
            }
            for r in 0..a.rows {
                if r == pivot_row || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for c in col..a.cols {
                    let p = a.get(pivot_row, c);
                    if !p.is_zero() {
                        let v = a.get(r, c) - &factor * p;
                        a.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{v : self * v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[fc] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -red.get(row, fc).clone();
                }
                v
            })
            .collect()
    }

    /// A particular solution of `self * x = b` with every free variable set
    /// to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, Inconsistent> {
        assert_eq!(b.len(), self.rows, "right-hand side has the wrong length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Inconsistent);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(row, self.cols).clone();
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, Scalar::one())] }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in pairs {
            *map.entry(i).or_insert_with(Scalar::zero) += v;
        }
        SparseVec { entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn scale(&mut self, factor: &Scalar) {
        if factor.is_zero() {
            self.entries.clear();
        } else {
            for (_, v) in &mut self.entries {
                *v *= factor;
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, factor: &Scalar) {
        if factor.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, _)), Some((ib, _))) if ia < ib => out.push(a.next().unwrap()),
                (Some((ia, _)), Some((ib, _))) if ia > ib => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, v * factor));
                }
                (Some(_), Some(_)) => {
                    let (i, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let s = va + vb * factor;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, v * factor));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    /// Shifts every index by `offset`.
    pub fn offset(mut self, offset: usize) -> Self {
        for (i, _) in &mut self.entries {
            *i += offset;
        }
        self
    }

    /// Concatenation where `other`'s indices are already disjoint and larger.
    pub fn append(&mut self, other: SparseVec) {
        debug_assert!(match (self.entries.last(), other.entries.first()) {
            (Some((a, _)), Some((b, _))) => a < b,
            _ => true,
        });
        self.entries.extend(other.entries);
    }

    pub fn dot_dense(&self, dense: &[Scalar]) -> Scalar {
        self.entries.iter().fold(Scalar::zero(), |acc, (i, v)| acc + v * &dense[*i])
    }
}

/// Outcome of feeding a vector to [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inserted {
    /// The vector was independent and became a new pivot row.
    Independent,
    /// The vector was in the span; `defect` is its tag minus the tag of the
    /// combination of existing rows that reproduces it.
    Dependent { defect: SparseVec },
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incremental sparse row echelon form over the rationals.
///
/// Each row carries a tag vector that undergoes the same linear combinations
/// as the row itself. Tags record either where a row came from (unit vectors)
/// or the image of the row under a linear map given on a spanning set.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, EchelonRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the pivot rows. Returns the residual (zero iff `v`
    /// lies in the row span) and the accumulated tag of the rows that were
    /// subtracted.
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut acc = SparseVec::new();
        let mut residual = SparseVec::new();
        while let Some((col, val)) = v.leading().cloned() {
            match self.rows.get(&col) {
                Some(row) => {
                    v.add_scaled(&row.vec, &-val.clone());
                    acc.add_scaled(&row.tag, &val);
                }
                None => {
                    // No pivot here: peel the entry off into the residual so
                    // later columns still reduce fully.
                    residual.entries.push((col, val));
                    v.entries.remove(0);
                }
            }
        }
        (residual, acc)
    }

    /// Expresses `v` in the row span, returning the combined tag, or `None`
    /// when `v` is outside the span.
    pub fn express(&self, v: SparseVec) -> Option<SparseVec> {
        let (residual, acc) = self.reduce(v);
        residual.is_zero().then_some(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).0.is_zero()
    }

    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> Inserted {
        let (residual, acc) = self.reduce(v);
        let mut tag = tag;
        tag.add_scaled(&acc, &-Scalar::one());
        if residual.is_zero() {
            return Inserted::Dependent { defect: tag };
        }
        let (col, lead) = residual.leading().cloned().unwrap();
        let inv = lead.recip();
        let mut vec = residual;
        vec.scale(&inv);
        tag.scale(&inv);
        // Keep the form fully reduced: clear this column from older rows.
        for row in self.rows.values_mut() {
            let c = row.vec.get(col);
            if !c.is_zero() {
                row.vec.add_scaled(&vec, &-c.clone());
                row.tag.add_scaled(&tag, &-c);
            }
        }
        self.rows.insert(col, EchelonRow { vec, tag });
        Inserted::Independent
    }

    /// Inserts without tracking a tag; returns whether the vector was new.
    pub fn push(&mut self, v: SparseVec) -> bool {
        matches!(self.insert(v, SparseVec::new()), Inserted::Independent)
    }
}

/// Solves `sum_j x_j * columns[j] = rhs` for a sparse column list, returning a
/// particular solution (dependent columns get coefficient zero).
pub fn solve_columns(columns: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Scalar>> {
    let mut ech = Echelon::new();
    for (j, c) in columns.iter().enumerate() {
        ech.insert(c.clone(), SparseVec::unit(j));
    }
    let tag = ech.express(rhs.clone())?;
    Some(tag.to_dense(columns.len()))
}

pub fn is_nonnegative_integer(q: &Scalar) -> bool {
    q.is_integer() && !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    #[test]
    fn rref_identity() {
        let (r, p) = Matrix::identity(2).rref();
        assert_eq!(r, Matrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_permutation() {
        let (r, p) = m(&[&[0, 1], &[1, 0]]).rref();
        assert_eq!(r, Matrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3).kernel_basis().is_empty());
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
        let a = m(&[&[1, 2], &[2, 4]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(4), frac(-1, 2)];
        assert_eq!(Matrix::identity(2).solve(&b).unwrap(), b);
        assert_eq!(m(&[&[1, 0], &[0, 0]]).solve(&[int(1), int(1)]), Err(Inconsistent));
        assert_eq!(m(&[&[2]]).solve(&[int(3)]).unwrap(), vec![frac(3, 2)]);
    }

    #[test]
    fn echelon_defect_and_express() {
        let mut e = Echelon::new();
        let v1 = SparseVec::from_dense(&[int(1), int(2), int(0)]);
        let v2 = SparseVec::from_dense(&[int(0), int(1), int(1)]);
        assert_eq!(e.insert(v1.clone(), SparseVec::unit(0)), Inserted::Independent);
        assert_eq!(e.insert(v2.clone(), SparseVec::unit(1)), Inserted::Independent);
        let mut sum = v1.clone();
        sum.add_scaled(&v2, &int(3));
        let coeffs = e.express(sum.clone()).unwrap();
        assert_eq!(coeffs.to_dense(2), vec![int(1), int(3)]);
        match e.insert(sum, SparseVec::unit(2)) {
            Inserted::Dependent { defect } => {
                assert_eq!(defect.to_dense(3), vec![int(-1), int(-3), int(1)]);
            }
            other => panic!("expected dependent, got {other:?}"),
        }
        assert!(!e.contains(&SparseVec::unit(2)));
    }

    #[test]
    fn solve_columns_matches_dense() {
        let cols = vec![SparseVec::from_dense(&[int(1), int(1)]), SparseVec::from_dense(&[int(1), int(-1)])];
        let x = solve_columns(&cols, &SparseVec::from_dense(&[int(3), int(1)])).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let degenerate = vec![SparseVec::from_dense(&[int(1), int(0)])];
        assert!(solve_columns(&degenerate, &SparseVec::from_dense(&[int(0), int(1)])).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                Matrix::from_rows(vals.chunks(c).map(|ch| ch.iter().map(|&x| int(x)).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(a in small_matrix()) {
            let (r, p) = a.rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p, p2);
        }

        #[test]
        fn rank_of_transpose(a in small_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn kernel_vectors_vanish(a in small_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(k.len(), a.cols() - a.rank());
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solve_reproduces_rhs(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let x0: Vec<Scalar> = (0..a.cols()).map(|i| int(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn sparse_rank_matches_dense(a in small_matrix()) {
            let mut e = Echelon::new();
            for r in 0..a.rows() {
                e.push(SparseVec::from_dense(a.row(r)));
            }
            prop_assert_eq!(e.rank(), a.rank());
        }
    }
}
