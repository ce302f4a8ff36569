//! Hetero-functional incidence tensors.
//!
//! The incidence tensors record which capability pulls which operand from
//! which buffer (negative form) and which capability injects which operand
//! into which buffer (positive form). They are built in third-order form
//! over (operand, buffer, capability), split into fourth-order form over
//! (operand, buffer, process, resource), and matricized into second-order
//! form whose Boolean product reconstructs the hetero-functional adjacency
//! matrix.

use crate::boolmat::{matricize, vec_inv_mode, BoolMatrix, BoolTensor};
use crate::error::{Error, Result};
use crate::model::{CapabilitySet, SystemModel};

/// Process-operand incidence matrices: the declared transformation and
/// holding blocks plus the assembled full matrices over all system
/// processes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperandIncidence {
    pub m_lp_mu_minus: BoolMatrix,
    pub m_lp_mu_plus: BoolMatrix,
    pub m_lp_gamma_minus: BoolMatrix,
    pub m_lp_gamma_plus: BoolMatrix,
    /// `sigma(L) x sigma(P)`: inputs of every system process.
    pub m_lp_minus: BoolMatrix,
    /// `sigma(L) x sigma(P)`: outputs of every system process.
    pub m_lp_plus: BoolMatrix,
}

/// Assembles the full process-operand incidence matrices. The refined
/// transportation block replicates each holding column across all
/// `n_transport` origin-destination pairs: `M_LPgamma (x) ones_row`.
pub fn build_mlp(
    m_lp_mu_minus: &BoolMatrix,
    m_lp_mu_plus: &BoolMatrix,
    m_lp_gamma_minus: &BoolMatrix,
    m_lp_gamma_plus: &BoolMatrix,
    n_transport: usize,
) -> Result<OperandIncidence> {
    let n_l = m_lp_mu_minus.n_rows();
    for (m, what) in [
        (m_lp_mu_plus, "M_LPmu+"),
        (m_lp_gamma_minus, "M_LPgamma-"),
        (m_lp_gamma_plus, "M_LPgamma+"),
    ] {
        if m.n_rows() != n_l {
            return Err(Error::DimensionMismatch {
                context: "process-operand incidence assembly",
                left: format!("{n_l} operand rows"),
                right: format!("{} rows in {what}", m.n_rows()),
            });
        }
    }
    let ones_row = BoolMatrix::ones(1, n_transport);
    let concat = |mu: &BoolMatrix, gamma: &BoolMatrix| -> Result<BoolMatrix> {
        let refined = gamma.kron(&ones_row);
        let n_mu = mu.n_cols();
        BoolMatrix::from_entries(
            n_l,
            n_mu + refined.n_cols(),
            mu.iter().chain(refined.iter().map(|(r, c)| (r, c + n_mu))),
        )
    };
    Ok(OperandIncidence {
        m_lp_minus: concat(m_lp_mu_minus, m_lp_gamma_minus)?,
        m_lp_plus: concat(m_lp_mu_plus, m_lp_gamma_plus)?,
        m_lp_mu_minus: m_lp_mu_minus.clone(),
        m_lp_mu_plus: m_lp_mu_plus.clone(),
        m_lp_gamma_minus: m_lp_gamma_minus.clone(),
        m_lp_gamma_plus: m_lp_gamma_plus.clone(),
    })
}

impl OperandIncidence {
    pub fn build(model: &SystemModel) -> Self {
        build_mlp(
            model.m_lp_mu_minus(),
            model.m_lp_mu_plus(),
            model.m_lp_gamma_minus(),
            model.m_lp_gamma_plus(),
            model.n_transport(),
        )
        .expect("model shapes validated at construction")
    }
}

fn check_operand_buffer(model: &SystemModel, i: usize, y: usize) -> Result<()> {
    if i >= model.n_operands() {
        return Err(Error::IndexOutOfRange(format!(
            "operand index {i} for {} operands",
            model.n_operands()
        )));
    }
    if y >= model.n_buffers() {
        return Err(Error::IndexOutOfRange(format!(
            "buffer index {y} for {} buffers",
            model.n_buffers()
        )));
    }
    Ok(())
}

/// `X^-(i, y1)`: the `sigma(P) x sigma(R)` indicator of processes that
/// pull operand `i` as an input and originate at buffer `y1`.
/// Transformation processes occupy their host-machine column (zero when
/// `y1` is an independent buffer); refined transportation rows with origin
/// `y1` span all resource columns.
pub fn build_x_minus(model: &SystemModel, i: usize, y1: usize) -> Result<BoolMatrix> {
    check_operand_buffer(model, i, y1)?;
    let mut entries = Vec::new();
    if y1 < model.n_machines() {
        for w in model.m_lp_mu_minus().row(i) {
            entries.push((w, y1));
        }
    }
    let n_mu = model.n_transform();
    let n_bs = model.n_buffers();
    let n_eta = model.n_transport();
    for g in model.m_lp_gamma_minus().row(i) {
        for y2 in 0..n_bs {
            let phi = g * n_eta + y1 * n_bs + y2;
            for v in 0..model.n_resources() {
                entries.push((n_mu + phi, v));
            }
        }
    }
    BoolMatrix::from_entries(model.n_processes(), model.n_resources(), entries)
}

/// `X^+(i, y2)`: the indicator of processes that inject operand `i` as an
/// output and terminate at buffer `y2`.
pub fn build_x_plus(model: &SystemModel, i: usize, y2: usize) -> Result<BoolMatrix> {
    check_operand_buffer(model, i, y2)?;
    let mut entries = Vec::new();
    if y2 < model.n_machines() {
        for w in model.m_lp_mu_plus().row(i) {
            entries.push((w, y2));
        }
    }
    let n_mu = model.n_transform();
    let n_bs = model.n_buffers();
    let n_eta = model.n_transport();
    for g in model.m_lp_gamma_plus().row(i) {
        for y1 in 0..n_bs {
            let phi = g * n_eta + y1 * n_bs + y2;
            for v in 0..model.n_resources() {
                entries.push((n_mu + phi, v));
            }
        }
    }
    BoolMatrix::from_entries(model.n_processes(), model.n_resources(), entries)
}

/// Signed incidence tensor over {-1, 0, 1}: positive minus negative. Kept
/// over the integers and never fed back into the Boolean kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTensor {
    dims: Vec<usize>,
    entries: Vec<(Vec<usize>, i8)>,
}

impl SignedTensor {
    pub fn difference(plus: &BoolTensor, minus: &BoolTensor) -> Result<Self> {
        if plus.dims() != minus.dims() {
            return Err(Error::DimensionMismatch {
                context: "signed incidence tensor",
                left: format!("{:?}", plus.dims()),
                right: format!("{:?}", minus.dims()),
            });
        }
        let mut map: std::collections::BTreeMap<Vec<usize>, i8> = std::collections::BTreeMap::new();
        for c in plus.iter() {
            *map.entry(c.to_vec()).or_insert(0) += 1;
        }
        for c in minus.iter() {
            *map.entry(c.to_vec()).or_insert(0) -= 1;
        }
        Ok(SignedTensor {
            dims: plus.dims().to_vec(),
            entries: map.into_iter().filter(|&(_, v)| v != 0).collect(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, coord: &[usize]) -> i8 {
        self.entries
            .binary_search_by(|(c, _)| c.as_slice().cmp(coord))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], i8)> + '_ {
        self.entries.iter().map(|(c, v)| (c.as_slice(), *v))
    }
}

/// Builds the third-order incidence tensors. With `projected` set, the
/// capability mode is indexed by `psi` over `sigma(E_S)`; otherwise by the
/// vectorized index `chi` over `sigma(P)*sigma(R)`, masked to existing
/// capabilities.
pub fn build_m3(
    model: &SystemModel,
    a_s: &BoolMatrix,
    caps: &CapabilitySet,
    projected: bool,
) -> Result<(BoolTensor, BoolTensor)> {
    caps.verify_against(a_s)
        .map_err(|e| Error::ProjectorMismatch(format!("incidence construction: {e}")))?;
    let n_l = model.n_operands();
    let n_bs = model.n_buffers();
    let n_p = model.n_processes();
    let cap_mode = if projected { caps.len() } else { n_p * model.n_resources() };
    let dims = [n_l, n_bs, cap_mode];

    let fill = |negative: bool| -> Result<BoolTensor> {
        let mut entries = Vec::new();
        for i in 0..n_l {
            for y in 0..n_bs {
                let x = if negative {
                    build_x_minus(model, i, y)?
                } else {
                    build_x_plus(model, i, y)?
                };
                let masked = x.and(a_s)?;
                for (w, v) in masked.iter() {
                    let chi = n_p * v + w;
                    if projected {
                        let psi = caps
                            .psi_of(w, v)
                            .expect("masked entries are capabilities by construction");
                        entries.push(vec![i, y, psi]);
                    } else {
                        entries.push(vec![i, y, chi]);
                    }
                }
            }
        }
        BoolTensor::from_entries(&dims, entries)
    };

    Ok((fill(true)?, fill(false)?))
}

/// Splits the capability mode of an unprojected third-order tensor into
/// (process, resource) modes.
pub fn build_m4(m3u: &BoolTensor, n_processes: usize, n_resources: usize) -> Result<BoolTensor> {
    vec_inv_mode(m3u, &[n_processes, n_resources], 2)
}

/// Matricizes a projected third-order tensor into the
/// `sigma(L)*sigma(B_S) x sigma(E_S)` incidence matrix; each column is one
/// capability's operand-buffer footprint.
pub fn matricize_m(m3: &BoolTensor) -> Result<BoolMatrix> {
    matricize(m3, &[0, 1], &[2])
}

/// The full family of incidence forms for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceTensors {
    /// Projected third-order forms over (operand, buffer, psi).
    pub m3_minus: BoolTensor,
    pub m3_plus: BoolTensor,
    /// Unprojected third-order forms over (operand, buffer, chi).
    pub m3u_minus: BoolTensor,
    pub m3u_plus: BoolTensor,
    /// Fourth-order forms over (operand, buffer, process, resource).
    pub m4_minus: BoolTensor,
    pub m4_plus: BoolTensor,
    /// Matricized second-order forms, `sigma(L)*sigma(B_S) x sigma(E_S)`.
    pub m2_minus: BoolMatrix,
    pub m2_plus: BoolMatrix,
}

impl IncidenceTensors {
    pub fn build(model: &SystemModel, a_s: &BoolMatrix, caps: &CapabilitySet) -> Result<Self> {
        let (m3_minus, m3_plus) = build_m3(model, a_s, caps, true)?;
        let (m3u_minus, m3u_plus) = build_m3(model, a_s, caps, false)?;
        let n_p = model.n_processes();
        let n_r = model.n_resources();
        Ok(IncidenceTensors {
            m4_minus: build_m4(&m3u_minus, n_p, n_r)?,
            m4_plus: build_m4(&m3u_plus, n_p, n_r)?,
            m2_minus: matricize_m(&m3_minus)?,
            m2_plus: matricize_m(&m3_plus)?,
            m3_minus,
            m3_plus,
            m3u_minus,
            m3u_plus,
        })
    }

    /// Signed projected tensor: positive minus negative over the integers.
    pub fn signed_m3(&self) -> SignedTensor {
        SignedTensor::difference(&self.m3_plus, &self.m3_minus)
            .expect("projected forms share dims by construction")
    }
}

/// The projected hetero-functional adjacency matrix as the Boolean product
/// of the incidence matrices: a capability pair is adjacent exactly when
/// the first injects some operand into some buffer from which the second
/// pulls it.
pub fn adjacency_from_incidence(
    m2_plus: &BoolMatrix,
    m2_minus: &BoolMatrix,
) -> Result<BoolMatrix> {
    if m2_plus.shape() != m2_minus.shape() {
        return Err(Error::DimensionMismatch {
            context: "adjacency from incidence",
            left: format!("{}x{}", m2_plus.n_rows(), m2_plus.n_cols()),
            right: format!("{}x{}", m2_minus.n_rows(), m2_minus.n_cols()),
        });
    }
    m2_plus.transpose().matmul(m2_minus)
}

/// The dual adjacency tensor over (origin, destination, pulled operand,
/// injected operand): entry `(y1, y2, i1, i2)` is 1 when some capability
/// pulls `i1` at `y1` and injects `i2` at `y2`. The capability identity is
/// contracted away, which is exactly the lucidity loss of the multi-layer
/// network view.
pub fn dual_adjacency(
    m2_minus: &BoolMatrix,
    m2_plus: &BoolMatrix,
    n_operands: usize,
    n_buffers: usize,
) -> Result<BoolTensor> {
    if m2_plus.shape() != m2_minus.shape() {
        return Err(Error::DimensionMismatch {
            context: "dual adjacency",
            left: format!("{}x{}", m2_minus.n_rows(), m2_minus.n_cols()),
            right: format!("{}x{}", m2_plus.n_rows(), m2_plus.n_cols()),
        });
    }
    if m2_minus.n_rows() != n_operands * n_buffers {
        return Err(Error::DimensionMismatch {
            context: "dual adjacency",
            left: format!("{} place rows", m2_minus.n_rows()),
            right: format!("{n_operands} operands x {n_buffers} buffers"),
        });
    }
    let product = m2_minus.matmul(&m2_plus.transpose())?;
    // Rows and columns decompose with the operand index fastest, matching
    // the matricization of the third-order tensors.
    let mut entries = Vec::with_capacity(product.count_ones());
    for (r, c) in product.iter() {
        let i1 = r % n_operands;
        let y1 = r / n_operands;
        let i2 = c % n_operands;
        let y2 = c / n_operands;
        entries.push(vec![y1, y2, i1, i2]);
    }
    BoolTensor::from_entries(&[n_buffers, n_buffers, n_operands, n_operands], entries)
}
