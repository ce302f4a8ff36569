//! The hetero-functional adjacency matrix.
//!
//! Nodes are capabilities (filled system-concept entries) and edges are
//! feasible pairwise sequences. The sequence constraints can be evaluated
//! two ways: directly, by checking the feasibility rules over every pair
//! of capabilities, or through closed-form constraint matrices assembled
//! from Kronecker products of elementary vectors. A third, independent
//! route through the incidence matrices lives in [`crate::incidence`].
//! All three must agree bit-for-bit; the test suites enforce it.

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::incidence::{adjacency_from_incidence, IncidenceTensors, OperandIncidence};
use crate::model::{CapabilitySet, SystemModel};

/// Which construction route produced a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionPath {
    /// Rule evaluation over capability pairs.
    LoopRules,
    /// Kronecker closed-form constraint matrices.
    TensorClosedForm,
    /// Product of the positive and negative incidence matrices.
    IncidenceProduct,
}

impl std::fmt::Display for ConstructionPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConstructionPath::LoopRules => "loop",
            ConstructionPath::TensorClosedForm => "tensor",
            ConstructionPath::IncidenceProduct => "incidence",
        };
        f.write_str(s)
    }
}

/// A constructed hetero-functional graph: the capability set, the full
/// vectorized adjacency matrix, its projected form, and the route that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HfgtGraph {
    pub capabilities: CapabilitySet,
    /// `sigma(P)*sigma(R)` square, indexed by the vectorized chi.
    pub a_rho: BoolMatrix,
    /// `sigma(E_S)` square, indexed by psi.
    pub a_rho_proj: BoolMatrix,
    pub provenance: ConstructionPath,
}

/// System sequence knowledge base: the rank-1 Boolean outer product of the
/// vectorized system concept. Every ordered pair of capabilities is a
/// potential sequence.
pub fn build_jrho(a_s: &BoolMatrix) -> BoolMatrix {
    let v = a_s.vectorize();
    v.matmul(&v.transpose())
        .expect("outer product shapes conform by construction")
}

/// Functional-graph adjacency over processes: `A_P(w1, w2) = 1` when the
/// output operand set of `w1` intersects the input operand set of `w2`.
/// An explicit override from the model is returned unchanged.
pub fn derive_ap(m_lp_plus: &BoolMatrix, m_lp_minus: &BoolMatrix) -> Result<BoolMatrix> {
    if m_lp_plus.shape() != m_lp_minus.shape() {
        return Err(Error::DimensionMismatch {
            context: "functional graph derivation",
            left: format!("{}x{}", m_lp_plus.n_rows(), m_lp_plus.n_cols()),
            right: format!("{}x{}", m_lp_minus.n_rows(), m_lp_minus.n_cols()),
        });
    }
    m_lp_plus.transpose().matmul(m_lp_minus)
}

/// The model's functional graph: the declared override when present,
/// otherwise the operand-set intersection rule.
pub fn effective_ap(model: &SystemModel) -> Result<BoolMatrix> {
    if let Some(ap) = model.a_p_override() {
        return Ok(ap.clone());
    }
    let inc = OperandIncidence::build(model);
    derive_ap(&inc.m_lp_plus, &inc.m_lp_minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ProcessRole {
    Transform,
    /// Refined transportation with 0-based origin and destination buffers.
    Transport { origin: usize, destination: usize },
}

fn role_of(model: &SystemModel, w: usize) -> ProcessRole {
    if w < model.n_transform() {
        ProcessRole::Transform
    } else {
        let phi = w - model.n_transform();
        let u = phi % model.n_transport();
        ProcessRole::Transport {
            origin: u / model.n_buffers(),
            destination: u % model.n_buffers(),
        }
    }
}

/// The four buffer-continuity rules: a pair of capabilities is physically
/// chainable when the first ends where the second begins.
fn continuity(model: &SystemModel, w1: usize, v1: usize, w2: usize, v2: usize) -> bool {
    let n_m = model.n_machines();
    match (role_of(model, w1), role_of(model, w2)) {
        // Two transformations at the same transformation resource.
        (ProcessRole::Transform, ProcessRole::Transform) => v1 == v2 && v1 < n_m,
        // Transformation then transport originating at its machine.
        (ProcessRole::Transform, ProcessRole::Transport { origin, .. }) => {
            v1 < n_m && origin == v1
        }
        // Transport terminating at the machine of the transformation.
        (ProcessRole::Transport { destination, .. }, ProcessRole::Transform) => {
            v2 < n_m && destination == v2
        }
        // Transport then transport: destination equals origin.
        (
            ProcessRole::Transport { destination, .. },
            ProcessRole::Transport { origin, .. },
        ) => destination == origin,
    }
}

/// System sequence constraints by direct rule evaluation. Only pairs
/// inside the `J_rho` support (pairs of existing capabilities) are
/// evaluated; a pair is constrained out when it fails buffer continuity
/// or the functional graph.
pub fn build_krho_loop(
    model: &SystemModel,
    a_s: &BoolMatrix,
    a_p: &BoolMatrix,
) -> Result<BoolMatrix> {
    let n_p = model.n_processes();
    let n_r = model.n_resources();
    if a_s.shape() != (n_p, n_r) {
        return Err(Error::DimensionMismatch {
            context: "sequence constraints (loop)",
            left: format!("{}x{}", a_s.n_rows(), a_s.n_cols()),
            right: format!("{n_p}x{n_r} concept"),
        });
    }
    if a_p.shape() != (n_p, n_p) {
        return Err(Error::DimensionMismatch {
            context: "sequence constraints (loop)",
            left: format!("{}x{}", a_p.n_rows(), a_p.n_cols()),
            right: format!("{n_p}x{n_p} functional graph"),
        });
    }
    let caps: Vec<(usize, usize)> = a_s.iter().collect();
    let side = n_p * n_r;
    let mut entries = Vec::new();
    for &(w1, v1) in &caps {
        let chi1 = n_p * v1 + w1;
        for &(w2, v2) in &caps {
            let feasible = continuity(model, w1, v1, w2, v2) && a_p.get(w1, w2);
            if !feasible {
                entries.push((chi1, n_p * v2 + w2));
            }
        }
    }
    BoolMatrix::from_entries(side, side, entries)
}

/// The closed-form feasibility matrices. The first four are materialized
/// sparse; the fifth (`(ones kron ones^T) kron A_P`) is dense by nature
/// and is therefore fused into every evaluation instead of being stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintBundle {
    pub kbar_i: BoolMatrix,
    pub kbar_ii: BoolMatrix,
    pub kbar_iii: BoolMatrix,
    pub kbar_iv: BoolMatrix,
    pub a_p: BoolMatrix,
    n_processes: usize,
}

fn outer_from_supports(
    side: usize,
    rows: &[usize],
    cols: &[usize],
    into: &mut Vec<(usize, usize)>,
) {
    debug_assert!(rows.iter().all(|&r| r < side) && cols.iter().all(|&c| c < side));
    for &r in rows {
        for &c in cols {
            into.push((r, c));
        }
    }
}

/// Closed-form construction of the feasibility matrices from Kronecker
/// and outer products of elementary vectors,.following the block
/// structure of the vectorized concept: `chi = n_p*v + w`.
pub fn build_krho_tensor(model: &SystemModel, a_p: &BoolMatrix) -> Result<ConstraintBundle> {
    let n_p = model.n_processes();
    let n_r = model.n_resources();
    let n_m = model.n_machines();
    let n_bs = model.n_buffers();
    let n_mu = model.n_transform();
    let n_eta = model.n_transport();
    let n_gamma = model.n_holding();
    if a_p.shape() != (n_p, n_p) {
        return Err(Error::DimensionMismatch {
            context: "sequence constraints (tensor)",
            left: format!("{}x{}", a_p.n_rows(), a_p.n_cols()),
            right: format!("{n_p}x{n_p} functional graph"),
        });
    }
    let side = n_p * n_r;

    // chi indices of the transformation block of resource column v.
    let transform_block = |v: usize| -> Vec<usize> { (0..n_mu).map(|w| n_p * v + w).collect() };
    // chi indices of refined transports with the given origin, across all
    // resource columns: X_{y}^{sigma(P_etabar)} = ones kron e_y kron ones.
    let transports_with_origin = |y1: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(n_r * n_gamma * n_bs);
        for v in 0..n_r {
            for g in 0..n_gamma {
                for y2 in 0..n_bs {
                    out.push(n_p * v + n_mu + g * n_eta + y1 * n_bs + y2);
                }
            }
        }
        out
    };
    let transports_with_destination = |y2: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(n_r * n_gamma * n_bs);
        for v in 0..n_r {
            for g in 0..n_gamma {
                for y1 in 0..n_bs {
                    out.push(n_p * v + n_mu + g * n_eta + y1 * n_bs + y2);
                }
            }
        }
        out
    };

    // Type I: sum over machines of (e_v kron [ones; 0]) times itself.
    let mut entries_i = Vec::new();
    for v in 0..n_m {
        let block = transform_block(v);
        outer_from_supports(side, &block, &block, &mut entries_i);
    }

    // Type II: transformation at machine v, then transport originating
    // at buffer v on any resource.
    let mut entries_ii = Vec::new();
    for v in 0..n_m {
        outer_from_supports(side, &transform_block(v), &transports_with_origin(v), &mut entries_ii);
    }

    // Type III: transport terminating at buffer v on any resource, then
    // transformation at machine v.
    let mut entries_iii = Vec::new();
    for v in 0..n_m {
        outer_from_supports(
            side,
            &transports_with_destination(v),
            &transform_block(v),
            &mut entries_iii,
        );
    }

    // Type IV: transport terminating at y, then transport originating at y.
    let mut entries_iv = Vec::new();
    for y in 0..n_bs {
        outer_from_supports(
            side,
            &transports_with_destination(y),
            &transports_with_origin(y),
            &mut entries_iv,
        );
    }

    Ok(ConstraintBundle {
        kbar_i: BoolMatrix::from_entries(side, side, entries_i)?,
        kbar_ii: BoolMatrix::from_entries(side, side, entries_ii)?,
        kbar_iii: BoolMatrix::from_entries(side, side, entries_iii)?,
        kbar_iv: BoolMatrix::from_entries(side, side, entries_iv)?,
        a_p: a_p.clone(),
        n_processes: n_p,
    })
}

impl ConstraintBundle {
    /// Boolean OR of the four continuity matrices.
    pub fn kbar_continuity(&self) -> Result<BoolMatrix> {
        self.kbar_i
            .or(&self.kbar_ii)?
            .or(&self.kbar_iii)?
            .or(&self.kbar_iv)
    }

    /// The fused feasibility test
    /// `(Kbar_I + Kbar_II + Kbar_III + Kbar_IV) . Kbar_V` at one pair.
    pub fn feasible(&self, chi1: usize, chi2: usize) -> bool {
        let w1 = chi1 % self.n_processes;
        let w2 = chi2 % self.n_processes;
        if !self.a_p.get(w1, w2) {
            return false;
        }
        self.kbar_i.get(chi1, chi2)
            || self.kbar_ii.get(chi1, chi2)
            || self.kbar_iii.get(chi1, chi2)
            || self.kbar_iv.get(chi1, chi2)
    }

    /// The sequence constraints restricted to a support: entries of
    /// `support` whose pair is infeasible.
    pub fn krho_on(&self, support: &BoolMatrix) -> Result<BoolMatrix> {
        let side = self.kbar_i.n_rows();
        if support.shape() != (side, side) {
            return Err(Error::DimensionMismatch {
                context: "sequence constraints on support",
                left: format!("{}x{}", support.n_rows(), support.n_cols()),
                right: format!("{side}x{side}"),
            });
        }
        BoolMatrix::from_entries(
            side,
            side,
            support
                .iter()
                .filter(|&(chi1, chi2)| !self.feasible(chi1, chi2)),
        )
    }
}

/// `A_rho = J_rho (-) K_rho`.
pub fn build_arho(j_rho: &BoolMatrix, k_rho: &BoolMatrix) -> Result<BoolMatrix> {
    j_rho.minus(k_rho)
}

/// Projects the vectorized adjacency matrix onto the capability axis:
/// `P_S A_rho P_S^T`. Degrees of freedom are preserved exactly because the
/// projector rows are distinct elementary vectors covering the support.
pub fn project(a_rho: &BoolMatrix, caps: &CapabilitySet) -> Result<BoolMatrix> {
    let side = caps.n_processes() * caps.n_resources();
    if a_rho.shape() != (side, side) {
        return Err(Error::ProjectorMismatch(format!(
            "adjacency is {}x{}, capability space is {side}x{side}",
            a_rho.n_rows(),
            a_rho.n_cols()
        )));
    }
    let p = caps.projector();
    p.matmul(a_rho)?.matmul(&p.transpose())
}

/// Sequence-dependent degrees of freedom: the number of feasible pairs,
/// identical for the projected and unprojected forms.
pub fn dof_rho(adjacency: &BoolMatrix) -> Result<usize> {
    if !adjacency.is_square() {
        return Err(Error::InvalidArgument(format!(
            "DOF_rho expects a square adjacency matrix, got {}x{}",
            adjacency.n_rows(),
            adjacency.n_cols()
        )));
    }
    Ok(adjacency.count_ones())
}

impl HfgtGraph {
    /// Builds the hetero-functional graph of a model along the chosen
    /// construction route.
    pub fn build(model: &SystemModel, path: ConstructionPath) -> Result<Self> {
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        let a_p = effective_ap(model)?;
        let a_rho = match path {
            ConstructionPath::LoopRules => {
                let j_rho = build_jrho(&a_s);
                let k_rho = build_krho_loop(model, &a_s, &a_p)?;
                build_arho(&j_rho, &k_rho)?
            }
            ConstructionPath::TensorClosedForm => {
                let j_rho = build_jrho(&a_s);
                let bundle = build_krho_tensor(model, &a_p)?;
                let k_rho = bundle.krho_on(&j_rho)?;
                build_arho(&j_rho, &k_rho)?
            }
            ConstructionPath::IncidenceProduct => {
                let tensors = IncidenceTensors::build(model, &a_s, &caps)?;
                let tilde = adjacency_from_incidence(&tensors.m2_plus, &tensors.m2_minus)?;
                // Unproject: conjugation by the transposed projector
                // embeds the capability-indexed matrix back into the
                // vectorized space.
                let p = caps.projector();
                p.transpose().matmul(&tilde)?.matmul(p)?
            }
        };
        let a_rho_proj = project(&a_rho, &caps)?;
        Ok(HfgtGraph {
            capabilities: caps,
            a_rho,
            a_rho_proj,
            provenance: path,
        })
    }

    pub fn dof_rho(&self) -> usize {
        self.a_rho_proj.count_ones()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelSpec, Operand, ProcessDef, Resource, ResourceKind};

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    fn toy_model() -> SystemModel {
        SystemModel::new(ModelSpec {
            operands: vec![Operand::new("water")],
            machines: vec![Resource::new("m1", ResourceKind::Machine)],
            independent_buffers: vec![Resource::new("b1", ResourceKind::IndependentBuffer)],
            transporters: vec![Resource::new("h1", ResourceKind::Transporter)],
            transform: vec![ProcessDef::new("treat", [0], [0])],
            holding: vec![ProcessDef::new("hold-water", [0], [0])],
            j_m: Some(m(&[&[1]])),
            j_gamma: Some(m(&[&[1, 1, 1]])),
            j_h: Some(m(&[&[1, 0, 0], &[0, 0, 1], &[0, 0, 0], &[0, 1, 0]])),
            ..ModelSpec::default()
        })
        .unwrap()
    }

    #[test]
    fn jrho_is_rank_one() {
        let a_s = toy_model().a_s();
        let j_rho = build_jrho(&a_s);
        assert_eq!(j_rho.shape(), (15, 15));
        assert_eq!(j_rho.count_ones(), 16);

        let single = BoolMatrix::from_entries(2, 2, vec![(1, 0)]).unwrap();
        assert_eq!(build_jrho(&single).count_ones(), 1);
        assert!(build_jrho(&BoolMatrix::zeros(2, 2)).is_empty());
    }

    #[test]
    fn derive_ap_single_operand_all_ones() {
        let model = toy_model();
        let ap = effective_ap(&model).unwrap();
        assert_eq!(ap, BoolMatrix::ones(5, 5));
    }

    #[test]
    fn derive_ap_disjoint_subsystems_block_diagonal() {
        // Water processes (0, 1) and power processes (2, 3) never chain
        // across the operand boundary.
        let plus = m(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let minus = m(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let ap = derive_ap(&plus, &minus).unwrap();
        let expected = m(&[
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
            &[0, 0, 1, 1],
        ]);
        assert_eq!(ap, expected);
    }

    #[test]
    fn ap_override_passthrough() {
        let mut spec = ModelSpec {
            operands: vec![Operand::new("water")],
            machines: vec![Resource::new("m1", ResourceKind::Machine)],
            independent_buffers: vec![Resource::new("b1", ResourceKind::IndependentBuffer)],
            transporters: vec![Resource::new("h1", ResourceKind::Transporter)],
            transform: vec![ProcessDef::new("treat", [0], [0])],
            holding: vec![ProcessDef::new("hold-water", [0], [0])],
            j_m: Some(m(&[&[1]])),
            j_gamma: Some(m(&[&[1, 1, 1]])),
            j_h: Some(m(&[&[1, 0, 0], &[0, 0, 1], &[0, 0, 0], &[0, 1, 0]])),
            ..ModelSpec::default()
        };
        spec.a_p_override = Some(BoolMatrix::zeros(5, 5));
        let model = SystemModel::new(spec).unwrap();
        assert_eq!(effective_ap(&model).unwrap(), BoolMatrix::zeros(5, 5));
    }

    #[test]
    fn loop_rules_toy_pairs() {
        let model = toy_model();
        let a_s = model.a_s();
        let a_p = effective_ap(&model).unwrap();
        let k_rho = build_krho_loop(&model, &a_s, &a_p).unwrap();
        let n_p = 5;
        let chi = |w: usize, v: usize| n_p * v + w;
        // treat@m1 then transport m1->b1 (w=2 by h1, v=2) is feasible.
        assert!(!k_rho.get(chi(0, 0), chi(2, 2)));
        // store@b1 (w=4, v=1) then transport m1->b1 fails: origin m1 != b1.
        assert!(k_rho.get(chi(4, 1), chi(2, 2)));
    }

    #[test]
    fn zero_ap_eliminates_everything() {
        let model = toy_model();
        let a_s = model.a_s();
        let j_rho = build_jrho(&a_s);
        let zero_ap = BoolMatrix::zeros(5, 5);
        let k_rho = build_krho_loop(&model, &a_s, &zero_ap).unwrap();
        // Rule V annihilates: K_rho covers the whole J_rho support.
        assert_eq!(k_rho, j_rho);
        assert!(build_arho(&j_rho, &k_rho).unwrap().is_empty());
    }

    #[test]
    fn tensor_kbar_i_single_machine() {
        let model = toy_model();
        let a_p = BoolMatrix::ones(5, 5);
        let bundle = build_krho_tensor(&model, &a_p).unwrap();
        // sigma(P_mu)^2 = 1 entry in the (v=0, v=0) block at (w=0, w=0).
        assert_eq!(bundle.kbar_i.count_ones(), 1);
        assert!(bundle.kbar_i.get(0, 0));
    }

    #[test]
    fn kbar_v_all_ones_ap_never_blocks() {
        let model = toy_model();
        let bundle = build_krho_tensor(&model, &BoolMatrix::ones(5, 5)).unwrap();
        let or4 = bundle.kbar_continuity().unwrap();
        for chi1 in 0..15 {
            for chi2 in 0..15 {
                assert_eq!(bundle.feasible(chi1, chi2), or4.get(chi1, chi2));
            }
        }
    }

    #[test]
    fn toy_adjacency_three_paths_agree() {
        let model = toy_model();
        let loop_graph = HfgtGraph::build(&model, ConstructionPath::LoopRules).unwrap();
        let tensor_graph = HfgtGraph::build(&model, ConstructionPath::TensorClosedForm).unwrap();
        let incidence_graph =
            HfgtGraph::build(&model, ConstructionPath::IncidenceProduct).unwrap();
        assert_eq!(loop_graph.a_rho_proj, tensor_graph.a_rho_proj);
        assert_eq!(loop_graph.a_rho_proj, incidence_graph.a_rho_proj);
        assert_eq!(loop_graph.a_rho, tensor_graph.a_rho);
        assert_eq!(loop_graph.a_rho, incidence_graph.a_rho);
        assert_eq!(loop_graph.dof_rho(), 8);
        assert_eq!(loop_graph.a_rho_proj.shape(), (4, 4));
    }

    #[test]
    fn projection_preserves_dof() {
        let model = toy_model();
        let graph = HfgtGraph::build(&model, ConstructionPath::LoopRules).unwrap();
        assert_eq!(
            dof_rho(&graph.a_rho).unwrap(),
            dof_rho(&graph.a_rho_proj).unwrap()
        );
    }

    #[test]
    fn full_concept_projector_is_a_permutation() {
        // When every (process, resource) pair is a capability, projection
        // is conjugation by a permutation of the vectorized space.
        let a_s = BoolMatrix::ones(2, 3);
        let caps = CapabilitySet::from_concept(&a_s);
        assert_eq!(caps.len(), 6);
        let a_rho = build_jrho(&BoolMatrix::from_entries(2, 3, vec![(1, 2)]).unwrap());
        let projected = project(&a_rho, &caps).unwrap();
        assert_eq!(projected.count_ones(), a_rho.count_ones());
        // Ascending chi over a full concept is the identity permutation.
        assert_eq!(caps.projector(), &BoolMatrix::identity(6));
        assert_eq!(projected, a_rho);
    }

    #[test]
    fn project_rejects_foreign_shapes() {
        let model = toy_model();
        let caps = CapabilitySet::from_concept(&model.a_s());
        let wrong = BoolMatrix::zeros(4, 4);
        assert!(matches!(
            project(&wrong, &caps),
            Err(Error::ProjectorMismatch(_))
        ));
        assert!(project(&BoolMatrix::zeros(15, 15), &caps).unwrap().is_empty());
    }

    #[test]
    fn dof_rho_limits() {
        assert!(dof_rho(&BoolMatrix::zeros(3, 4)).is_err());
        assert_eq!(dof_rho(&BoolMatrix::zeros(4, 4)).unwrap(), 0);
        // With K_rho = 0, A_rho = J_rho and DOF_rho = DOF_S^2.
        let a_s = toy_model().a_s();
        let j_rho = build_jrho(&a_s);
        assert_eq!(dof_rho(&j_rho).unwrap(), 16);
    }
}
