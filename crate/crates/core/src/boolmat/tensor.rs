//! Exact sparse Boolean tensors with matricization, tensorization,
//! vectorization, and n-mode products.
//!
//! The flattening convention throughout is permute-then-reshape with
//! column-major linear indexing: for an ordered mode list `[q_1..q_k]`,
//! the flat index of a coordinate is `sum_l i_{q_l} * prod_{l'<l} p_{q_l'}`
//! (0-based), so the first listed mode varies fastest. Mode numbers in
//! this API are 0-based.

use crate::boolmat::matrix::BoolMatrix;
use crate::error::{Error, Result};

/// A sparse exact {0,1} tensor of arbitrary rank.
///
/// Entries are the coordinates holding a 1, sorted lexicographically, so
/// equality is structural. Rank-2 tensors convert losslessly to
/// [`BoolMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolTensor {
    dims: Vec<usize>,
    entries: Vec<Vec<usize>>,
}

impl BoolTensor {
    pub fn zeros(dims: &[usize]) -> Self {
        BoolTensor {
            dims: dims.to_vec(),
            entries: Vec::new(),
        }
    }

    pub fn from_entries<I>(dims: &[usize], iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut entries: Vec<Vec<usize>> = Vec::new();
        for coord in iter {
            if coord.len() != dims.len()
                || coord.iter().zip(dims.iter()).any(|(&i, &p)| i >= p)
            {
                return Err(Error::TensorCoordInvalid {
                    coord,
                    dims: dims.to_vec(),
                });
            }
            entries.push(coord);
        }
        entries.sort_unstable();
        entries.dedup();
        Ok(BoolTensor {
            dims: dims.to_vec(),
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn count_ones(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, coord: &[usize]) -> bool {
        self.entries.binary_search_by(|e| e.as_slice().cmp(coord)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.entries.iter().map(|c| c.as_slice())
    }

    /// Converts a rank-2 tensor into a matrix.
    pub fn to_matrix(&self) -> Result<BoolMatrix> {
        if self.rank() != 2 {
            return Err(Error::ModeError(format!(
                "to_matrix requires rank 2, got rank {}",
                self.rank()
            )));
        }
        BoolMatrix::from_entries(
            self.dims[0],
            self.dims[1],
            self.entries.iter().map(|c| (c[0], c[1])),
        )
    }

    /// Embeds a matrix as a rank-2 tensor.
    pub fn from_matrix(m: &BoolMatrix) -> Self {
        BoolTensor {
            dims: vec![m.n_rows(), m.n_cols()],
            entries: m.iter().map(|(r, c)| vec![r, c]).collect(),
        }
    }

    /// Coordinate reversal: `T'(i_n,...,i_1) = T(i_1,...,i_n)`.
    pub fn transpose(&self) -> BoolTensor {
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let mut entries: Vec<Vec<usize>> = self
            .entries
            .iter()
            .map(|c| c.iter().rev().copied().collect())
            .collect();
        entries.sort_unstable();
        BoolTensor { dims, entries }
    }
}

fn check_mode_partition(rank: usize, row_modes: &[usize], col_modes: &[usize]) -> Result<()> {
    let mut seen = vec![false; rank];
    for &m in row_modes.iter().chain(col_modes.iter()) {
        if m >= rank {
            return Err(Error::ModeError(format!(
                "mode {m} out of range for rank {rank}"
            )));
        }
        if seen[m] {
            return Err(Error::ModeError(format!("mode {m} listed twice")));
        }
        seen[m] = true;
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::ModeError(
            "row and column modes must partition all modes".to_string(),
        ));
    }
    Ok(())
}

fn flat_index(coord: &[usize], modes: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    let mut stride = 1;
    for &m in modes {
        idx += coord[m] * stride;
        stride *= dims[m];
    }
    idx
}

fn unflat_index(mut idx: usize, modes: &[usize], dims: &[usize], coord: &mut [usize]) {
    for &m in modes {
        coord[m] = idx % dims[m];
        idx /= dims[m];
    }
}

/// Matricization: flattens `row_modes` into the row axis and `col_modes`
/// into the column axis (permute-then-reshape, column-major).
pub fn matricize(t: &BoolTensor, row_modes: &[usize], col_modes: &[usize]) -> Result<BoolMatrix> {
    check_mode_partition(t.rank(), row_modes, col_modes)?;
    let n_rows: usize = row_modes.iter().map(|&m| t.dims[m]).product();
    let n_cols: usize = col_modes.iter().map(|&m| t.dims[m]).product();
    BoolMatrix::from_entries(
        n_rows,
        n_cols,
        t.entries.iter().map(|coord| {
            (
                flat_index(coord, row_modes, &t.dims),
                flat_index(coord, col_modes, &t.dims),
            )
        }),
    )
}

/// Tensorization: exact inverse of [`matricize`] for the same mode lists.
pub fn tensorize(
    m: &BoolMatrix,
    dims: &[usize],
    row_modes: &[usize],
    col_modes: &[usize],
) -> Result<BoolTensor> {
    check_mode_partition(dims.len(), row_modes, col_modes)?;
    let n_rows: usize = row_modes.iter().map(|&m| dims[m]).product();
    let n_cols: usize = col_modes.iter().map(|&m| dims[m]).product();
    if m.shape() != (n_rows, n_cols) {
        return Err(Error::DimensionMismatch {
            context: "tensorize",
            left: format!("{}x{}", m.n_rows(), m.n_cols()),
            right: format!("{n_rows}x{n_cols} implied by dims and modes"),
        });
    }
    let entries = m.iter().map(|(r, c)| {
        let mut coord = vec![0; dims.len()];
        unflat_index(r, row_modes, dims, &mut coord);
        unflat_index(c, col_modes, dims, &mut coord);
        coord
    });
    BoolTensor::from_entries(dims, entries)
}

/// Vectorization: flattens all modes into a single column vector,
/// first mode fastest.
pub fn vec(t: &BoolTensor) -> BoolMatrix {
    let all_modes: Vec<usize> = (0..t.rank()).collect();
    let len: usize = t.dims.iter().product();
    BoolMatrix::from_entries(
        len.max(if t.rank() == 0 { 1 } else { len }),
        1,
        t.entries
            .iter()
            .map(|coord| (flat_index(coord, &all_modes, &t.dims), 0)),
    )
    .expect("vectorized coordinates are in range by construction")
}

/// Inverse vectorization of a column vector into the given dims.
pub fn vec_inv(v: &BoolMatrix, dims: &[usize]) -> Result<BoolTensor> {
    let len: usize = dims.iter().product();
    if v.n_cols() != 1 || v.n_rows() != len {
        return Err(Error::DimensionMismatch {
            context: "inverse vectorization",
            left: format!("{}x{}", v.n_rows(), v.n_cols()),
            right: format!("{len}x1 implied by dims {dims:?}"),
        });
    }
    let all_modes: Vec<usize> = (0..dims.len()).collect();
    let entries = v.iter().map(|(j, _)| {
        let mut coord = vec![0; dims.len()];
        unflat_index(j, &all_modes, dims, &mut coord);
        coord
    });
    BoolTensor::from_entries(dims, entries)
}

/// Inverse vectorization applied to one mode of a tensor: mode `mode`
/// (0-based) of extent `prod(split_dims)` is replaced in place by the
/// modes of `split_dims`, first split dim fastest.
pub fn vec_inv_mode(t: &BoolTensor, split_dims: &[usize], mode: usize) -> Result<BoolTensor> {
    if mode >= t.rank() {
        return Err(Error::ModeError(format!(
            "mode {mode} out of range for rank {}",
            t.rank()
        )));
    }
    let prod: usize = split_dims.iter().product();
    if prod != t.dims[mode] {
        return Err(Error::DimensionMismatch {
            context: "vec_inv_mode",
            left: format!("mode extent {}", t.dims[mode]),
            right: format!("product of split dims {split_dims:?}"),
        });
    }
    let mut dims = Vec::with_capacity(t.rank() - 1 + split_dims.len());
    dims.extend_from_slice(&t.dims[..mode]);
    dims.extend_from_slice(split_dims);
    dims.extend_from_slice(&t.dims[mode + 1..]);
    let modes: Vec<usize> = (0..split_dims.len()).collect();
    let entries = t.entries.iter().map(|coord| {
        let mut new_coord = Vec::with_capacity(dims.len());
        new_coord.extend_from_slice(&coord[..mode]);
        let mut split = vec![0; split_dims.len()];
        unflat_index(coord[mode], &modes, split_dims, &mut split);
        new_coord.extend_from_slice(&split);
        new_coord.extend_from_slice(&coord[mode + 1..]);
        new_coord
    });
    BoolTensor::from_entries(&dims, entries)
}

/// N-mode Boolean matrix product: contracts mode `mode` of `t` against the
/// rows of `b`, `C(..,j,..) = OR_{i_p} T(..,i_p,..) AND B(i_p,j)`.
pub fn n_mode_bool(t: &BoolTensor, b: &BoolMatrix, mode: usize) -> Result<BoolTensor> {
    if mode >= t.rank() {
        return Err(Error::ModeError(format!(
            "mode {mode} out of range for rank {}",
            t.rank()
        )));
    }
    if t.dims[mode] != b.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "n-mode boolean product",
            left: format!("mode extent {}", t.dims[mode]),
            right: format!("{} matrix rows", b.n_rows()),
        });
    }
    let mut dims = t.dims.clone();
    dims[mode] = b.n_cols();
    let mut entries: Vec<Vec<usize>> = Vec::new();
    for coord in &t.entries {
        for j in b.row(coord[mode]) {
            let mut new_coord = coord.clone();
            new_coord[mode] = j;
            entries.push(new_coord);
        }
    }
    entries.sort_unstable();
    entries.dedup();
    Ok(BoolTensor { dims, entries })
}

/// Outer product of column vectors: `B(i_1..i_n) = prod_k A_k(i_k)`.
/// Requires at least two vectors, each of shape `n_k x 1`.
pub fn outer_product(vectors: &[&BoolMatrix]) -> Result<BoolTensor> {
    if vectors.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "outer product requires at least 2 vectors, got {}",
            vectors.len()
        )));
    }
    for v in vectors {
        if v.n_cols() != 1 {
            return Err(Error::InvalidArgument(
                "outer product operands must be column vectors".to_string(),
            ));
        }
    }
    let dims: Vec<usize> = vectors.iter().map(|v| v.n_rows()).collect();
    let mut entries: Vec<Vec<usize>> = vec![Vec::new()];
    for v in vectors {
        let supports: Vec<usize> = v.iter().map(|(r, _)| r).collect();
        let mut next = Vec::with_capacity(entries.len() * supports.len());
        for prefix in &entries {
            for &i in &supports {
                let mut coord = prefix.clone();
                coord.push(i);
                next.push(coord);
            }
        }
        entries = next;
    }
    entries.sort_unstable();
    Ok(BoolTensor { dims, entries })
}
