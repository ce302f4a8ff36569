//! Exact sparse Boolean matrices.
//!
//! `BoolMatrix` stores the coordinates of its 1-entries in canonical
//! row-major order, so equality is structural and iteration order is
//! deterministic. All coordinates are 0-based; the 1-based convention of
//! the usual linear-algebra notation applies only at file-format
//! boundaries (see [`crate::boolmat::io`]).

use crate::error::{Error, Result};

/// A sparse exact {0,1} matrix.
///
/// Values are immutable after construction; every operation returns a new
/// matrix. The entry list is sorted by (row, col) and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize)>,
}

impl BoolMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        BoolMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        BoolMatrix {
            n_rows: n,
            n_cols: n,
            entries: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// All-ones matrix of the given shape.
    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                entries.push((r, c));
            }
        }
        BoolMatrix {
            n_rows,
            n_cols,
            entries,
        }
    }

    /// Elementary basis column vector e_i of length `n` (0-based `i`).
    pub fn basis_column(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange(format!(
                "basis index {i} for vector of length {n}"
            )));
        }
        Ok(BoolMatrix {
            n_rows: n,
            n_cols: 1,
            entries: vec![(i, 0)],
        })
    }

    /// Builds a matrix from an arbitrary entry iterator. Duplicates are
    /// merged (Boolean semantics); out-of-range coordinates are rejected.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut entries: Vec<(usize, usize)> = Vec::new();
        for (r, c) in iter {
            if r >= n_rows || c >= n_cols {
                return Err(Error::CoordOutOfRange {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            entries.push((r, c));
        }
        entries.sort_unstable();
        entries.dedup();
        Ok(BoolMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    /// Builds from a dense 0/1 row list; handy in tests and examples.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidArgument(
                    "ragged row list in from_rows".to_string(),
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((r, c));
                }
            }
        }
        Ok(BoolMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Number of 1-entries.
    pub fn count_ones(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries.binary_search(&(row, col)).is_ok()
    }

    /// Iterates entries in canonical (row, col) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    /// 1-entries of a single row, in ascending column order.
    pub fn row(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.entries.partition_point(|&(r, _)| r < row);
        self.entries[start..]
            .iter()
            .take_while(move |&&(r, _)| r == row)
            .map(|&(_, c)| c)
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut entries: Vec<(usize, usize)> = self.entries.iter().map(|&(r, c)| (c, r)).collect();
        entries.sort_unstable();
        BoolMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            entries,
        }
    }

    fn check_same_shape(&self, other: &BoolMatrix, context: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context,
                left: format!("{}x{}", self.n_rows, self.n_cols),
                right: format!("{}x{}", other.n_rows, other.n_cols),
            });
        }
        Ok(())
    }

    /// Boolean addition: C(i,j) = A(i,j) OR B(i,j).
    pub fn or(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_shape(other, "boolean addition")?;
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&other.entries);
        entries.sort_unstable();
        entries.dedup();
        Ok(BoolMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        })
    }

    /// Boolean subtraction: C(i,j) = A(i,j) AND NOT B(i,j).
    pub fn minus(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_shape(other, "boolean subtraction")?;
        let entries = self
            .entries
            .iter()
            .filter(|e| other.entries.binary_search(e).is_err())
            .copied()
            .collect();
        Ok(BoolMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        })
    }

    /// Elementwise (scalar) Boolean product: C(i,j) = A(i,j) AND B(i,j).
    pub fn and(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_shape(other, "elementwise boolean product")?;
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let entries = small
            .entries
            .iter()
            .filter(|e| large.entries.binary_search(e).is_ok())
            .copied()
            .collect();
        Ok(BoolMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        })
    }

    /// Boolean matrix multiplication: C(i,k) = OR_j A(i,j) AND B(j,k).
    pub fn matmul(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::DimensionMismatch {
                context: "boolean matrix multiplication",
                left: format!("{}x{}", self.n_rows, self.n_cols),
                right: format!("{}x{}", other.n_rows, other.n_cols),
            });
        }
        let mut entries = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let mut cols: Vec<usize> = Vec::new();
            while i < self.entries.len() && self.entries[i].0 == row {
                let j = self.entries[i].1;
                cols.extend(other.row(j));
                i += 1;
            }
            cols.sort_unstable();
            cols.dedup();
            entries.extend(cols.into_iter().map(|k| (row, k)));
        }
        Ok(BoolMatrix {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            entries,
        })
    }

    /// Kronecker product. `C(p(i-1)+k, q(j-1)+l) = A(i,j) AND B(k,l)` in the
    /// 1-based scalar law; here with 0-based coordinates `(i*p+k, j*q+l)`.
    pub fn kron(&self, other: &BoolMatrix) -> BoolMatrix {
        let p = other.n_rows;
        let q = other.n_cols;
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(i, j) in &self.entries {
            for &(k, l) in &other.entries {
                entries.push((i * p + k, j * q + l));
            }
        }
        entries.sort_unstable();
        BoolMatrix {
            n_rows: self.n_rows * p,
            n_cols: self.n_cols * q,
            entries,
        }
    }

    /// Khatri-Rao product: the column-wise Kronecker product. Column j of
    /// the result is `A(:,j) kron B(:,j)`.
    pub fn khatri_rao(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.n_cols != other.n_cols {
            return Err(Error::DimensionMismatch {
                context: "khatri-rao product",
                left: format!("{} columns", self.n_cols),
                right: format!("{} columns", other.n_cols),
            });
        }
        let p = other.n_rows;
        let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); self.n_cols];
        for &(k, j) in &other.entries {
            by_col[j].push(k);
        }
        let mut entries = Vec::new();
        for &(i, j) in &self.entries {
            for &k in &by_col[j] {
                entries.push((i * p + k, j));
            }
        }
        entries.sort_unstable();
        Ok(BoolMatrix {
            n_rows: self.n_rows * p,
            n_cols: self.n_cols,
            entries,
        })
    }

    /// Frobenius inner product over {0,1}: the number of coordinates where
    /// both matrices hold a 1.
    pub fn frobenius(&self, other: &BoolMatrix) -> Result<usize> {
        Ok(self.and(other)?.count_ones())
    }

    /// Column-major vectorization as an `n_rows*n_cols x 1` column.
    pub fn vectorize(&self) -> BoolMatrix {
        let mut entries: Vec<(usize, usize)> = self
            .entries
            .iter()
            .map(|&(r, c)| (c * self.n_rows + r, 0))
            .collect();
        entries.sort_unstable();
        BoolMatrix {
            n_rows: self.n_rows * self.n_cols,
            n_cols: 1,
            entries,
        }
    }

    /// Inverse of [`BoolMatrix::vectorize`] for a known target shape.
    pub fn unvectorize(&self, n_rows: usize, n_cols: usize) -> Result<BoolMatrix> {
        if self.n_cols != 1 || self.n_rows != n_rows * n_cols {
            return Err(Error::DimensionMismatch {
                context: "unvectorize",
                left: format!("{}x{}", self.n_rows, self.n_cols),
                right: format!("{}x1", n_rows * n_cols),
            });
        }
        let mut entries: Vec<(usize, usize)> = self
            .entries
            .iter()
            .map(|&(j, _)| (j % n_rows, j / n_rows))
            .collect();
        entries.sort_unstable();
        Ok(BoolMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn or_disjoint_union() {
        let a = m(&[&[1, 0], &[0, 0]]);
        let b = m(&[&[0, 0], &[0, 1]]);
        assert_eq!(a.or(&b).unwrap(), m(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn or_identity_and_idempotence() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let zero = BoolMatrix::zeros(2, 2);
        assert_eq!(a.or(&zero).unwrap(), a);
        assert_eq!(a.or(&a).unwrap(), a);
        let one = m(&[&[1]]);
        assert_eq!(one.or(&one).unwrap(), one);
    }

    #[test]
    fn minus_elementwise_and_not() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let b = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(a.minus(&b).unwrap(), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(a.minus(&a).unwrap(), BoolMatrix::zeros(2, 2));
        assert_eq!(a.minus(&BoolMatrix::zeros(2, 2)).unwrap(), a);
    }

    #[test]
    fn and_elementwise() {
        let a = m(&[&[1, 1], &[1, 0]]);
        let b = m(&[&[1, 0], &[1, 1]]);
        assert_eq!(a.and(&b).unwrap(), m(&[&[1, 0], &[1, 0]]));
        assert_eq!(a.and(&BoolMatrix::ones(2, 2)).unwrap(), a);
        assert_eq!(a.and(&BoolMatrix::zeros(2, 2)).unwrap(), BoolMatrix::zeros(2, 2));
    }

    #[test]
    fn matmul_identity_and_or_of_products() {
        let b = m(&[&[1, 0], &[1, 1]]);
        assert_eq!(BoolMatrix::identity(2).matmul(&b).unwrap(), b);
        let row = m(&[&[1, 1]]);
        let col = m(&[&[0], &[1]]);
        assert_eq!(row.matmul(&col).unwrap(), m(&[&[1]]));
    }

    #[test]
    fn matmul_shape_mismatch() {
        let a = BoolMatrix::zeros(2, 3);
        let b = BoolMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kron_identity_blocks() {
        let b = m(&[&[1, 1], &[0, 1]]);
        let blocks = BoolMatrix::identity(2).kron(&b);
        let expected = m(&[
            &[1, 1, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 1],
            &[0, 0, 0, 1],
        ]);
        assert_eq!(blocks, expected);
    }

    #[test]
    fn kron_replication() {
        let ones2 = BoolMatrix::ones(2, 1);
        let a = m(&[&[1, 0]]);
        assert_eq!(ones2.kron(&a), m(&[&[1, 0], &[1, 0]]));
    }

    #[test]
    fn kron_basis_index_law() {
        // e_2^3 kron e_1^2 = e_3^6 (1-based), i.e. entry at 0-based row 2.
        let e2 = BoolMatrix::basis_column(3, 1).unwrap();
        let e1 = BoolMatrix::basis_column(2, 0).unwrap();
        assert_eq!(e2.kron(&e1), BoolMatrix::basis_column(6, 2).unwrap());
    }

    #[test]
    fn khatri_rao_column_vectors_equal_kron() {
        let a = m(&[&[1], &[0], &[1]]);
        let b = m(&[&[0], &[1]]);
        assert_eq!(a.khatri_rao(&b).unwrap(), a.kron(&b));
    }

    #[test]
    fn khatri_rao_ones_row_identity() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let ones_row = BoolMatrix::ones(1, 3);
        assert_eq!(a.khatri_rao(&ones_row).unwrap(), a);
    }

    #[test]
    fn khatri_rao_mismatch() {
        let a = BoolMatrix::zeros(2, 3);
        let b = BoolMatrix::zeros(2, 4);
        assert!(a.khatri_rao(&b).is_err());
    }

    #[test]
    fn vectorize_column_major() {
        // [[a,c],[b,d]] vectorizes to [a,b,c,d].
        let a = m(&[&[1, 0], &[0, 1]]);
        let v = a.vectorize();
        assert_eq!(v.shape(), (4, 1));
        assert!(v.get(0, 0) && v.get(3, 0));
        assert_eq!(v.unvectorize(2, 2).unwrap(), a);
    }

    #[test]
    fn duplicate_entries_merge() {
        let a = BoolMatrix::from_entries(2, 2, vec![(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(a.count_ones(), 2);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(BoolMatrix::from_entries(2, 2, vec![(2, 0)]).is_err());
    }
}
