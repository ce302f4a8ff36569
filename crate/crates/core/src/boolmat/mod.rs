//! Sparse exact Boolean matrix and tensor kernels.

pub mod io;
mod matrix;
mod real;
mod tensor;

pub use matrix::BoolMatrix;
pub use real::{RealMatrix, RealTensor};
pub use tensor::{
    matricize, n_mode_bool, outer_product, tensorize, vec, vec_inv, vec_inv_mode, BoolTensor,
};
