//! Knowledge-base assembly, the system concept, degree-of-freedom counts,
//! and the formal-graph / multi-commodity reconstructions.

use crate::boolmat::{matricize, n_mode_bool, tensorize, BoolMatrix, BoolTensor};
use crate::error::{Error, Result};
use crate::model::types::codes;

/// Refined transportation knowledge base: the Khatri-Rao product of the
/// holding and transportation knowledge bases. Row `n_eta*(g-1) + u`
/// (1-based) is the elementwise product of holding row `g` and
/// transportation row `u`.
pub fn assemble_jhbar(j_gamma: &BoolMatrix, j_h: &BoolMatrix) -> Result<BoolMatrix> {
    if j_gamma.n_cols() != j_h.n_cols() {
        return Err(Error::DimensionMismatch {
            context: "refined transportation knowledge base",
            left: format!("{} holding columns", j_gamma.n_cols()),
            right: format!("{} transportation columns", j_h.n_cols()),
        });
    }
    j_gamma.khatri_rao(j_h)
}

/// Block assembly of the system knowledge base:
/// transformation rows first (zero outside machine columns), refined
/// transportation rows below over all resource columns.
pub fn assemble_js(j_m: &BoolMatrix, j_hbar: &BoolMatrix) -> Result<BoolMatrix> {
    let n_resources = j_hbar.n_cols();
    if j_m.n_cols() > n_resources {
        return Err(Error::DimensionMismatch {
            context: "system knowledge base assembly",
            left: format!("{} machine columns", j_m.n_cols()),
            right: format!("{n_resources} resource columns"),
        });
    }
    let n_transform = j_m.n_rows();
    let entries = j_m
        .iter()
        .chain(j_hbar.iter().map(move |(r, c)| (r + n_transform, c)));
    BoolMatrix::from_entries(n_transform + j_hbar.n_rows(), n_resources, entries)
}

/// Block assembly of the system constraints matrix; same layout as
/// [`assemble_js`].
pub fn assemble_ks(k_m: &BoolMatrix, k_hbar: &BoolMatrix) -> Result<BoolMatrix> {
    assemble_js(k_m, k_hbar)
}

/// System concept: capabilities that exist and are not eliminated.
pub fn system_concept(j_s: &BoolMatrix, k_s: &BoolMatrix) -> Result<BoolMatrix> {
    j_s.minus(k_s)
}

/// Structural degrees of freedom: the number of filled system-concept
/// entries. Equals the Frobenius inner product of `J` with `NOT K`.
pub fn dof_s(j_s: &BoolMatrix, k_s: &BoolMatrix) -> Result<usize> {
    Ok(system_concept(j_s, k_s)?.count_ones())
}

/// Transformation degrees of freedom.
pub fn dof_m(j_m: &BoolMatrix, k_m: &BoolMatrix) -> Result<usize> {
    Ok(j_m.minus(k_m)?.count_ones())
}

/// Refined transportation degrees of freedom.
pub fn dof_h(j_hbar: &BoolMatrix, k_hbar: &BoolMatrix) -> Result<usize> {
    Ok(j_hbar.minus(k_hbar)?.count_ones())
}

/// Lifts `J_H` into its third-order tensor form with modes
/// (origin, destination, resource).
pub fn tensorize_jh(j_h: &BoolMatrix, n_bs: usize) -> Result<BoolTensor> {
    tensorize(
        j_h,
        &[n_bs, n_bs, j_h.n_cols()],
        &[1, 0],
        &[2],
    )
}

/// Inverse of [`tensorize_jh`].
pub fn matricize_jh(t: &BoolTensor) -> Result<BoolMatrix> {
    matricize(t, &[1, 0], &[2])
}

/// Lifts `J_Hbar` into its fourth-order tensor form with modes
/// (holding, origin, destination, resource).
pub fn tensorize_jhbar(j_hbar: &BoolMatrix, n_gamma: usize, n_bs: usize) -> Result<BoolTensor> {
    tensorize(
        j_hbar,
        &[n_gamma, n_bs, n_bs, j_hbar.n_cols()],
        &[2, 1, 0],
        &[3],
    )
}

/// Inverse of [`tensorize_jhbar`].
pub fn matricize_jhbar(t: &BoolTensor) -> Result<BoolMatrix> {
    matricize(t, &[2, 1, 0], &[3])
}

fn drop_reduced_mode(t: &BoolTensor) -> Result<BoolTensor> {
    let rank = t.rank();
    let dims: Vec<usize> = t.dims()[..rank - 1].to_vec();
    BoolTensor::from_entries(
        &dims,
        t.iter().map(|coord| coord[..rank - 1].to_vec()),
    )
}

/// Formal graph reconstruction: OR over the resource mode of the
/// transportation knowledge base tensor. `A_BS(y1,y2) = 1` iff some
/// resource executes the `(y1,y2)` transportation process.
pub fn formal_graph(jh_tensor: &BoolTensor) -> Result<BoolMatrix> {
    if jh_tensor.rank() != 3 || jh_tensor.dims()[0] != jh_tensor.dims()[1] {
        return Err(Error::ModeError(format!(
            "formal graph expects a rank-3 (B_S, B_S, R) tensor, got dims {:?}",
            jh_tensor.dims()
        )));
    }
    let ones = BoolMatrix::ones(jh_tensor.dims()[2], 1);
    let reduced = n_mode_bool(jh_tensor, &ones, 2)?;
    drop_reduced_mode(&reduced)?.to_matrix()
}

/// Multi-commodity flow network reconstruction: OR over the resource mode
/// of the refined transportation knowledge base tensor. Only meaningful
/// when holding processes map 1-to-1 onto operands, which the model must
/// assert explicitly.
pub fn multicommodity(jhbar_tensor: &BoolTensor, holding_is_operand: bool) -> Result<BoolTensor> {
    if !holding_is_operand {
        return Err(Error::Validation {
            code: codes::OPERAND_HOLDING_BIJECTION,
            message: "multi-commodity reconstruction requires the model to assert that \
                      holding processes map 1-to-1 onto operands"
                .to_string(),
        });
    }
    if jhbar_tensor.rank() != 4 || jhbar_tensor.dims()[1] != jhbar_tensor.dims()[2] {
        return Err(Error::ModeError(format!(
            "multi-commodity reconstruction expects a rank-4 (P_gamma, B_S, B_S, R) tensor, \
             got dims {:?}",
            jhbar_tensor.dims()
        )));
    }
    let ones = BoolMatrix::ones(jhbar_tensor.dims()[3], 1);
    let reduced = n_mode_bool(jhbar_tensor, &ones, 3)?;
    drop_reduced_mode(&reduced)
}
