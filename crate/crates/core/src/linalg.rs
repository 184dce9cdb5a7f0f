//! Exact sparse linear algebra over [`Scalar`].
//!
//! Elimination is fraction-free: every row is scaled to a primitive integer
//! vector, rows are combined as `p·r − r[c]·pivot`, and the result is divided
//! by its content. No modular arithmetic is used, so ranks are unconditional.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector: index → nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Adds `coeff` at `key`, dropping the entry if it cancels.
pub fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, coeff: &Scalar) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Scalar::from_int(v));
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                assert!(i < rows, "column entry out of range");
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        accumulate(&mut self.entries, (i, j), v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            out[i].insert(j, v.clone());
        }
        out
    }

    pub fn column_vectors(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.cols];
        for (&(i, j), v) in &self.entries {
            out[j].insert(i, v.clone());
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&(i, j), a) in &self.entries {
            if let Some(x) = v.get(&j) {
                accumulate(&mut out, i, &(a * x));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rhs_rows = rhs.row_vectors();
        let mut out = SparseMatrix::zero(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            for (&j, b) in &rhs_rows[k] {
                out.add_to(i, j, &(a * b));
            }
        }
        Ok(out)
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(v: &SparseVec) -> IntRow {
    let mut lcm = BigInt::one();
    for x in v.values() {
        lcm = lcm.lcm(x.denom());
    }
    let row: IntRow = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(&j, x)| (j, x.numer() * (&lcm / x.denom())))
        .collect();
    normalize(row)
}

/// Divides by the content and makes the leading entry positive.
fn normalize(mut row: IntRow) -> IntRow {
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, x) in &row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    row
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(j, _)| *j).ok().map(|k| &row[k].1)
}

/// `a·x − b·y`, merged by column.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut k) = (0, 0);
    while i < x.len() || k < y.len() {
        let take_x = k >= y.len() || (i < x.len() && x[i].0 < y[k].0);
        let take_y = i >= x.len() || (k < y.len() && y[k].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[k].0, -(b * &y[k].1)));
            k += 1;
        } else {
            let v = a * &x[i].1 - b * &y[k].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Eliminates the entry of `row` at `col` using `pivot` (whose entry at `col` is nonzero).
fn eliminate(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let p = entry(pivot, col).expect("pivot entry");
    let r = match entry(row, col) {
        Some(r) => r,
        None => return row.clone(),
    };
    let g = p.gcd(r);
    let (pa, ra) = (p / &g, r / &g);
    normalize(combine(&pa, row, &ra, pivot))
}

/// Reduced row-echelon basis of a row space.
///
/// Each stored row is a primitive integer vector whose leading column is a
/// pivot and which vanishes on every other pivot column.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, pivots: BTreeMap::new() }
    }

    pub fn from_rows<'a, I>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut rows: Vec<IntRow> = rows.into_iter().map(to_int_row).filter(|r| !r.is_empty()).collect();
        rows.sort_by_key(|r| r.len());
        let mut space = RowSpace::new(cols);
        for row in rows {
            space.insert_int(row);
        }
        space.back_substitute();
        space
    }

    fn insert_int(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some(&(lead, _)) = row.first() else { return false };
            assert!(lead < self.cols, "row entry out of range");
            match self.pivots.get(&lead) {
                Some(pivot) => row = eliminate(&row, pivot, lead),
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    fn back_substitute(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let pivot = self.pivots[&c].clone();
            for (_, row) in self.pivots.range_mut(..c) {
                if entry(row, c).is_some() {
                    *row = eliminate(row, &pivot, c);
                }
            }
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Canonical representative of `v` modulo the row space; supported on free columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (&c, row) in &self.pivots {
            let Some(x) = out.get(&c).cloned() else { continue };
            let p = Scalar::from_big(BigRational::from_integer(row[0].1.clone()));
            let factor = &x / &p;
            for (j, a) in row {
                let a = Scalar::from_big(BigRational::from_integer(a.clone()));
                accumulate(&mut out, *j, &-(&factor * &a));
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Basis of the null space `{x : r·x = 0 for every row r}`.
    pub fn null_space(&self) -> Vec<SparseVec> {
        self.free_cols()
            .into_iter()
            .map(|f| {
                let mut v = SparseVec::new();
                v.insert(f, Scalar::one());
                for (&c, row) in &self.pivots {
                    if let Some(a) = entry(row, f) {
                        let p = &row[0].1;
                        v.insert(c, Scalar::from_big(-BigRational::new(a.clone(), p.clone())));
                    }
                }
                v
            })
            .collect()
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    RowSpace::from_rows(m.cols(), &m.row_vectors()).rank()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    RowSpace::from_rows(m.cols(), &m.row_vectors()).null_space()
}

/// `dim ker(d_out) − rank(d_in)` for a composable pair `C' → C → C''`.
pub fn homology_dim(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::Dimension(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let composite = d_out.mul(d_in)?;
    if let Some((_, column, _)) = composite.entries().next() {
        return Err(Error::NotAComplex { column });
    }
    let kernel = d_out.cols() - rank(d_out);
    Ok(kernel - rank(d_in))
}

/// Kernel vectors of `d_out` whose classes form a basis of `ker d_out / im d_in`.
pub fn homology_basis(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Vec<SparseVec>> {
    homology_dim(d_in, d_out)?;
    let mut rows = d_in.column_vectors();
    let mut out = Vec::new();
    for k in kernel_basis(d_out) {
        if !RowSpace::from_rows(d_out.cols(), &rows).contains(&k) {
            rows.push(k.clone());
            out.push(k);
        }
    }
    Ok(out)
}

/// One solution of `a·x = b`, or `None` when the system is inconsistent.
pub fn solve_affine(a: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let n = a.cols();
    let mut rows = a.row_vectors();
    for (&i, v) in b {
        rows[i].insert(n, v.clone());
    }
    let space = RowSpace::from_rows(n + 1, &rows);
    if space.pivots.contains_key(&n) {
        return None;
    }
    let mut x = SparseVec::new();
    for (&c, row) in &space.pivots {
        if let Some(rhs) = entry(row, n) {
            x.insert(c, Scalar::from_big(BigRational::new(rhs.clone(), row[0].1.clone())));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(5)), 5);
        assert_eq!(rank(&SparseMatrix::zero(3, 4)), 0);
        assert_eq!(rank(&SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zero(2, 2)).len(), 2);
        let k = kernel_basis(&SparseMatrix::from_dense(&[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[&0], -v[&1].clone());
    }

    #[test]
    fn homology_examples() {
        let zero = SparseMatrix::zero(3, 3);
        assert_eq!(homology_dim(&zero, &zero).unwrap(), 3);
        // F --(1)--> F --(0)--> 0
        let d_in = SparseMatrix::from_dense(&[vec![1]]);
        let d_out = SparseMatrix::zero(0, 1);
        assert_eq!(homology_dim(&d_in, &d_out).unwrap(), 0);
        // charge-(0,0) torus complex: F → F² → F with zero maps.
        let d1 = SparseMatrix::zero(2, 1);
        let d0 = SparseMatrix::zero(1, 2);
        assert_eq!(homology_dim(&d1, &d0).unwrap(), 2);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let d = SparseMatrix::identity(2);
        match homology_dim(&d, &d) {
            Err(Error::NotAComplex { column }) => assert_eq!(column, 0),
            other => panic!("expected NotAComplex, got {other:?}"),
        }
    }

    #[test]
    fn reduce_gives_quotient_coordinates() {
        let mut r = SparseVec::new();
        r.insert(0, Scalar::from_int(2));
        r.insert(1, Scalar::from_int(-2));
        let space = RowSpace::from_rows(2, [&r]);
        assert_eq!(space.free_cols(), vec![1]);
        let mut v = SparseVec::new();
        v.insert(0, Scalar::from_int(3));
        let red = space.reduce(&v);
        assert_eq!(red.len(), 1);
        assert_eq!(red[&1], Scalar::from_int(3));
        assert!(space.contains(&r));
    }

    #[test]
    fn solve_affine_examples() {
        let a = SparseMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        let mut b = SparseVec::new();
        b.insert(0, Scalar::from_int(3));
        b.insert(1, Scalar::from_int(1));
        let x = solve_affine(&a, &b).unwrap();
        assert_eq!(x[&0], Scalar::from_int(2));
        assert_eq!(x[&1], Scalar::from_int(1));
        let singular = SparseMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        assert!(solve_affine(&singular, &b).is_none());
    }

    fn matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
                .prop_map(|rows| SparseMatrix::from_dense(&rows))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_empty());
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in matrix()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }
}
