//! Real-weighted sparse companions to the Boolean kernels.
//!
//! Real values never flow back into the Boolean algebra implicitly; use
//! [`RealMatrix::saturate`] to collapse nonzeros to a {0,1} pattern.

use crate::boolmat::matrix::BoolMatrix;
use crate::boolmat::tensor::BoolTensor;
use crate::error::{Error, Result};

/// Sparse real matrix; no explicit zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl RealMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        RealMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn from_entries<I>(n_rows: usize, n_cols: usize, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut map = std::collections::BTreeMap::new();
        for (r, c, v) in iter {
            if r >= n_rows || c >= n_cols {
                return Err(Error::CoordOutOfRange {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            *map.entry((r, c)).or_insert(0.0) += v;
        }
        Ok(RealMatrix {
            n_rows,
            n_cols,
            entries: map
                .into_iter()
                .filter(|&(_, v)| v != 0.0)
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        })
    }

    /// 0/1 embedding of a Boolean pattern.
    pub fn from_bool(m: &BoolMatrix) -> Self {
        RealMatrix {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            entries: m.iter().map(|(r, c)| (r, c, 1.0)).collect(),
        }
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

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn transpose(&self) -> RealMatrix {
        let mut entries: Vec<(usize, usize, f64)> =
            self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|a| (a.0, a.1));
        RealMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            entries,
        }
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::DimensionMismatch {
                context: "real matrix multiplication",
                left: format!("{}x{}", self.n_rows, self.n_cols),
                right: format!("{}x{}", other.n_rows, other.n_cols),
            });
        }
        let mut acc: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        let mut rows_of_other: Vec<Vec<(usize, f64)>> = vec![Vec::new(); other.n_rows];
        for &(r, c, v) in &other.entries {
            rows_of_other[r].push((c, v));
        }
        for &(i, j, a) in &self.entries {
            for &(k, b) in &rows_of_other[j] {
                *acc.entry((i, k)).or_insert(0.0) += a * b;
            }
        }
        Ok(RealMatrix {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            entries: acc
                .into_iter()
                .filter(|&(_, v)| v != 0.0)
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        })
    }

    pub fn kron(&self, other: &RealMatrix) -> RealMatrix {
        let p = other.n_rows;
        let q = other.n_cols;
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(i, j, a) in &self.entries {
            for &(k, l, b) in &other.entries {
                entries.push((i * p + k, j * q + l, a * b));
            }
        }
        entries.sort_unstable_by_key(|a| (a.0, a.1));
        RealMatrix {
            n_rows: self.n_rows * p,
            n_cols: self.n_cols * q,
            entries,
        }
    }

    /// Collapses every nonzero to 1: the explicit bridge back to the
    /// Boolean algebra.
    pub fn saturate(&self) -> BoolMatrix {
        BoolMatrix::from_entries(
            self.n_rows,
            self.n_cols,
            self.entries.iter().map(|&(r, c, _)| (r, c)),
        )
        .expect("saturated coordinates are in range by construction")
    }
}

/// Sparse real tensor; the real carrier for n-mode products.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTensor {
    dims: Vec<usize>,
    entries: Vec<(Vec<usize>, f64)>,
}

impl RealTensor {
    pub fn from_bool(t: &BoolTensor) -> Self {
        RealTensor {
            dims: t.dims().to_vec(),
            entries: t.iter().map(|c| (c.to_vec(), 1.0)).collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, coord: &[usize]) -> f64 {
        self.entries
            .binary_search_by(|(c, _)| c.as_slice().cmp(coord))
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// N-mode real product: `C(..,j,..) = sum_{i_p} T(..,i_p,..) * B(i_p,j)`.
    pub fn n_mode(&self, b: &RealMatrix, mode: usize) -> Result<RealTensor> {
        if mode >= self.dims.len() {
            return Err(Error::ModeError(format!(
                "mode {mode} out of range for rank {}",
                self.dims.len()
            )));
        }
        if self.dims[mode] != b.n_rows() {
            return Err(Error::DimensionMismatch {
                context: "n-mode real product",
                left: format!("mode extent {}", self.dims[mode]),
                right: format!("{} matrix rows", b.n_rows()),
            });
        }
        let mut rows_of_b: Vec<Vec<(usize, f64)>> = vec![Vec::new(); b.n_rows()];
        for (r, c, v) in b.iter() {
            rows_of_b[r].push((c, v));
        }
        let mut acc: std::collections::BTreeMap<Vec<usize>, f64> = std::collections::BTreeMap::new();
        for (coord, v) in &self.entries {
            for &(j, w) in &rows_of_b[coord[mode]] {
                let mut new_coord = coord.clone();
                new_coord[mode] = j;
                *acc.entry(new_coord).or_insert(0.0) += v * w;
            }
        }
        let mut dims = self.dims.clone();
        dims[mode] = b.n_cols();
        Ok(RealTensor {
            dims,
            entries: acc.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_product_matches_saturated_bool_product() {
        let a = BoolMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1]]).unwrap();
        let b = BoolMatrix::from_rows(&[&[1, 0], &[1, 1], &[0, 1]]).unwrap();
        let bool_prod = a.matmul(&b).unwrap();
        let real_prod = RealMatrix::from_bool(&a)
            .matmul(&RealMatrix::from_bool(&b))
            .unwrap();
        assert_eq!(real_prod.saturate(), bool_prod);
        // The real product keeps counts: (0,1) has two contributing paths.
        assert_eq!(real_prod.get(0, 1), 1.0);
        assert_eq!(real_prod.get(0, 0), 2.0);
    }

    #[test]
    fn real_kron_matches_bool_kron_pattern() {
        let a = BoolMatrix::from_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let b = BoolMatrix::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let rk = RealMatrix::from_bool(&a).kron(&RealMatrix::from_bool(&b));
        assert_eq!(rk.saturate(), a.kron(&b));
    }

    #[test]
    fn real_n_mode_identity() {
        let t = BoolTensor::from_entries(&[2, 3], vec![vec![0, 2], vec![1, 1]]).unwrap();
        let rt = RealTensor::from_bool(&t);
        let id = RealMatrix::from_bool(&BoolMatrix::identity(3));
        let out = rt.n_mode(&id, 1).unwrap();
        assert_eq!(out, rt);
    }

    #[test]
    fn explicit_zeros_dropped() {
        let m = RealMatrix::from_entries(2, 2, vec![(0, 0, 1.5), (1, 1, 0.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
    }
}
