//! Exact rational arithmetic and sparse linear algebra.
//!
//! Every structure constant, derivation coefficient and cochain value in the
//! crate is a [`Scalar`]. Rank, nullspace and linear solves run on a sparse,
//! fraction-free integer elimination: each row is cleared of denominators, and
//! rows are combined as `a·r − b·p` followed by division by the row content.
//! Only rows that share a leading column with a pivot are ever touched, so the
//! large, very sparse systems produced by the Leibniz and cocycle conditions
//! stay sparse.

mod echelon;
mod scalar;

use std::collections::BTreeMap;

pub use echelon::RowSpace;
pub use scalar::{format_scalar, parse_scalar, ParseScalarError, Scalar};

use num_traits::Zero;

/// A sparse matrix over the rationals. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    /// Builds a matrix from dense integer rows; all rows must have equal length.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, &Scalar::from_integer(v.into()));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.add(i, i, &Scalar::from_integer(1.into()));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Appends a row given as sparse `(column, value)` pairs; repeated columns
    /// are summed.
    pub fn push_row<'a, I>(&mut self, entries: I)
    where
        I: IntoIterator<Item = (usize, &'a Scalar)>,
    {
        self.rows += 1;
        self.data.push(BTreeMap::new());
        let r = self.rows - 1;
        for (c, v) in entries {
            self.add(r, c, v);
        }
    }

    /// Adds `value` to entry `(r, c)`, dropping the entry if it cancels.
    pub fn add(&mut self, r: usize, c: usize, value: &Scalar) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        if value.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        let slot = row.entry(c).or_insert_with(Scalar::zero);
        *slot += value;
        if slot.is_zero() {
            row.remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(&c).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Scalar> {
        &self.data[r]
    }

    /// Iterates the stored (nonzero) entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols, "vector length does not match column count");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Scalar::zero(), |acc, (&c, v)| acc + v * &x[c])
            })
            .collect()
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    out.add(r, c, &(a * b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::new(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            out.add(c, r, v);
        }
        out
    }

    /// Column `c` as a dense vector.
    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    fn row_space(&self) -> RowSpace {
        let mut space = RowSpace::new(self.cols);
        for row in &self.data {
            space.insert_sparse(row.iter().map(|(&c, v)| (c, v)));
        }
        space
    }
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    m.row_space().rank()
}

/// A basis of `{v : m·v = 0}`, one dense vector per free column of the
/// reduced row echelon form, each scaled so its first nonzero entry is 1.
///
/// The reduced echelon form is unique, so the basis does not depend on row
/// order.
pub fn nullspace(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let basis = m.row_space().kernel_basis();
    debug_assert!(basis
        .iter()
        .all(|v| m.mul_vec(v).iter().all(Zero::is_zero)));
    basis
}

/// Some exact solution of `m·x = b`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero, so the zero system returns the zero vector.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length does not match row count");
    let n = m.cols();
    let mut space = RowSpace::new(n + 1);
    for (row, rhs) in m.data.iter().zip(b) {
        let entries = row
            .iter()
            .map(|(&c, v)| (c, v))
            .chain((!rhs.is_zero()).then_some((n, rhs)));
        space.insert_sparse(entries);
    }
    if space.pivot_columns().any(|c| c == n) {
        return None;
    }
    let x = space.particular_solution(n);
    let check = m.mul_vec(&x);
    assert!(
        check.iter().zip(b).all(|(l, r)| l == r),
        "exact solve failed its own back-substitution check"
    );
    Some(x)
}

pub(crate) fn int(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}
