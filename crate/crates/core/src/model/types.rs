//! Domain types for the engineering-system abstraction.

use std::collections::BTreeSet;

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::model::knowledge;

/// Stable diagnostic codes for model validation failures.
pub mod codes {
    pub const DUPLICATE_ID: &str = "duplicate-id";
    pub const DANGLING_REFERENCE: &str = "dangling-reference";
    pub const SHAPE: &str = "shape";
    pub const CONSTRAINT_DOMINANCE: &str = "constraint-dominance";
    pub const PROCESS_DISTINCTNESS: &str = "process-distinctness";
    pub const TRANSFORM_HOST: &str = "transform-host";
    pub const OPERAND_HOLDING_BIJECTION: &str = "operand-holding-bijection";
    pub const LAYER_PARTITION: &str = "layer-partition";
}

/// An asset operated on or consumed by processes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operand {
    pub id: String,
    pub name: String,
}

impl Operand {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Operand {
            name: id.clone(),
            id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResourceKind {
    /// Transforms operands in place; also acts as a buffer.
    Machine,
    /// Stores operands without transforming or moving them.
    IndependentBuffer,
    /// Moves operands between buffers.
    Transporter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub id: String,
    pub kind: ResourceKind,
    pub location: Option<String>,
}

impl Resource {
    pub fn new(id: impl Into<String>, kind: ResourceKind) -> Self {
        Resource {
            id: id.into(),
            kind,
            location: None,
        }
    }
}

/// A transformation or holding process: an id plus input and output
/// operand sets (as indices into the model's operand list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDef {
    pub id: String,
    pub inputs: BTreeSet<usize>,
    pub outputs: BTreeSet<usize>,
}

impl ProcessDef {
    pub fn new<I, O>(id: impl Into<String>, inputs: I, outputs: O) -> Self
    where
        I: IntoIterator<Item = usize>,
        O: IntoIterator<Item = usize>,
    {
        ProcessDef {
            id: id.into(),
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
        }
    }
}

/// The declared process lists. Transportation and refined-transportation
/// processes are derived, not declared: there is one transportation
/// process per ordered buffer pair and one refined transportation process
/// per (holding, transportation) pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProcessCatalog {
    pub transform: Vec<ProcessDef>,
    pub holding: Vec<ProcessDef>,
}

/// A validated engineering-system model: the canonical orderings, the
/// split knowledge bases and constraints, and the process-operand
/// incidence inputs. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    operands: Vec<Operand>,
    resources: Vec<Resource>,
    catalog: ProcessCatalog,
    j_m: BoolMatrix,
    j_gamma: BoolMatrix,
    j_h: BoolMatrix,
    k_m: BoolMatrix,
    k_hbar: BoolMatrix,
    a_p_override: Option<BoolMatrix>,
    holding_is_operand: bool,
    // Derived incidence inputs, fixed at validation time.
    m_lp_mu_minus: BoolMatrix,
    m_lp_mu_plus: BoolMatrix,
    m_lp_gamma_minus: BoolMatrix,
    m_lp_gamma_plus: BoolMatrix,
    n_machines: usize,
    n_buffers: usize,
}

/// Builder-style input to [`SystemModel::new`].
#[derive(Debug, Clone, Default)]
pub struct ModelSpec {
    pub operands: Vec<Operand>,
    pub machines: Vec<Resource>,
    pub independent_buffers: Vec<Resource>,
    pub transporters: Vec<Resource>,
    pub transform: Vec<ProcessDef>,
    pub holding: Vec<ProcessDef>,
    /// Transformation capabilities, `sigma(P_mu) x sigma(M)`.
    pub j_m: Option<BoolMatrix>,
    /// Holding capabilities, `sigma(P_gamma) x sigma(R)`.
    pub j_gamma: Option<BoolMatrix>,
    /// Transportation capabilities, `sigma(B_S)^2 x sigma(R)`.
    pub j_h: Option<BoolMatrix>,
    /// Transformation constraints, same shape as `j_m`.
    pub k_m: Option<BoolMatrix>,
    /// Refined transportation constraints, `sigma(P_etabar) x sigma(R)`.
    pub k_hbar: Option<BoolMatrix>,
    pub a_p_override: Option<BoolMatrix>,
    pub holding_is_operand: bool,
}

fn validation(code: &'static str, message: String) -> Error {
    Error::Validation { code, message }
}

fn check_unique_ids<'a, I: Iterator<Item = &'a str>>(ids: I, what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(validation(
                codes::DUPLICATE_ID,
                format!("duplicate {what} id `{id}`"),
            ));
        }
    }
    Ok(())
}

fn check_operand_refs(procs: &[ProcessDef], n_operands: usize) -> Result<()> {
    for p in procs {
        for &i in p.inputs.iter().chain(p.outputs.iter()) {
            if i >= n_operands {
                return Err(validation(
                    codes::DANGLING_REFERENCE,
                    format!("process `{}` references operand index {i} out of range", p.id),
                ));
            }
        }
    }
    Ok(())
}

fn check_distinct_signatures(procs: &[ProcessDef], what: &str) -> Result<()> {
    for (a, pa) in procs.iter().enumerate() {
        for pb in procs.iter().skip(a + 1) {
            if pa.inputs == pb.inputs && pa.outputs == pb.outputs {
                return Err(validation(
                    codes::PROCESS_DISTINCTNESS,
                    format!(
                        "{what} processes `{}` and `{}` share identical input and output operand sets",
                        pa.id, pb.id
                    ),
                ));
            }
        }
    }
    Ok(())
}

fn check_shape(m: &BoolMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(validation(
            codes::SHAPE,
            format!(
                "{what} must be {rows}x{cols}, got {}x{}",
                m.n_rows(),
                m.n_cols()
            ),
        ));
    }
    Ok(())
}

fn incidence_from(procs: &[ProcessDef], n_operands: usize, inputs: bool) -> BoolMatrix {
    let entries = procs.iter().enumerate().flat_map(|(w, p)| {
        let set = if inputs { &p.inputs } else { &p.outputs };
        set.iter().map(move |&i| (i, w))
    });
    BoolMatrix::from_entries(n_operands, procs.len(), entries)
        .expect("operand references validated before incidence assembly")
}

impl SystemModel {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        check_unique_ids(spec.operands.iter().map(|o| o.id.as_str()), "operand")?;
        if spec.machines.iter().any(|r| r.kind != ResourceKind::Machine)
            || spec
                .independent_buffers
                .iter()
                .any(|r| r.kind != ResourceKind::IndependentBuffer)
            || spec
                .transporters
                .iter()
                .any(|r| r.kind != ResourceKind::Transporter)
        {
            return Err(validation(
                codes::SHAPE,
                "resource listed under the wrong kind section".to_string(),
            ));
        }
        let mut resources = Vec::new();
        resources.extend(spec.machines);
        resources.extend(spec.independent_buffers);
        resources.extend(spec.transporters);
        check_unique_ids(resources.iter().map(|r| r.id.as_str()), "resource")?;
        check_unique_ids(
            spec.transform
                .iter()
                .chain(spec.holding.iter())
                .map(|p| p.id.as_str()),
            "process",
        )?;

        let n_operands = spec.operands.len();
        check_operand_refs(&spec.transform, n_operands)?;
        check_operand_refs(&spec.holding, n_operands)?;
        check_distinct_signatures(&spec.transform, "transformation")?;
        check_distinct_signatures(&spec.holding, "holding")?;

        let n_machines = resources
            .iter()
            .filter(|r| r.kind == ResourceKind::Machine)
            .count();
        let n_buffers = resources
            .iter()
            .filter(|r| r.kind != ResourceKind::Transporter)
            .count();
        let n_resources = resources.len();
        let n_transform = spec.transform.len();
        let n_holding = spec.holding.len();
        let n_transport = n_buffers * n_buffers;
        let n_refined = n_holding * n_transport;

        let j_m = spec
            .j_m
            .unwrap_or_else(|| BoolMatrix::zeros(n_transform, n_machines));
        let j_gamma = spec
            .j_gamma
            .unwrap_or_else(|| BoolMatrix::zeros(n_holding, n_resources));
        let j_h = spec
            .j_h
            .unwrap_or_else(|| BoolMatrix::zeros(n_transport, n_resources));
        let k_m = spec
            .k_m
            .unwrap_or_else(|| BoolMatrix::zeros(n_transform, n_machines));
        let k_hbar = spec
            .k_hbar
            .unwrap_or_else(|| BoolMatrix::zeros(n_refined, n_resources));

        check_shape(&j_m, n_transform, n_machines, "J_M")?;
        check_shape(&j_gamma, n_holding, n_resources, "J_gamma")?;
        check_shape(&j_h, n_transport, n_resources, "J_H")?;
        check_shape(&k_m, n_transform, n_machines, "K_M")?;
        check_shape(&k_hbar, n_refined, n_resources, "K_Hbar")?;

        // A constraint can only eliminate an existing capability.
        if !k_m.minus(&j_m)?.is_empty() {
            return Err(validation(
                codes::CONSTRAINT_DOMINANCE,
                "K_M flags an event absent from J_M".to_string(),
            ));
        }
        let j_hbar = knowledge::assemble_jhbar(&j_gamma, &j_h)?;
        if !k_hbar.minus(&j_hbar)?.is_empty() {
            return Err(validation(
                codes::CONSTRAINT_DOMINANCE,
                "K_Hbar flags an event absent from J_Hbar".to_string(),
            ));
        }

        let n_processes = n_transform + n_refined;
        if let Some(ap) = &spec.a_p_override {
            check_shape(ap, n_processes, n_processes, "A_P override")?;
        }

        let m_lp_mu_minus = incidence_from(&spec.transform, n_operands, true);
        let m_lp_mu_plus = incidence_from(&spec.transform, n_operands, false);
        let m_lp_gamma_minus = incidence_from(&spec.holding, n_operands, true);
        let m_lp_gamma_plus = incidence_from(&spec.holding, n_operands, false);

        Ok(SystemModel {
            operands: spec.operands,
            resources,
            catalog: ProcessCatalog {
                transform: spec.transform,
                holding: spec.holding,
            },
            j_m,
            j_gamma,
            j_h,
            k_m,
            k_hbar,
            a_p_override: spec.a_p_override,
            holding_is_operand: spec.holding_is_operand,
            m_lp_mu_minus,
            m_lp_mu_plus,
            m_lp_gamma_minus,
            m_lp_gamma_plus,
            n_machines,
            n_buffers,
        })
    }

    pub fn operands(&self) -> &[Operand] {
        &self.operands
    }

    /// Resources in the canonical [machines; independent buffers;
    /// transporters] order, so buffer indices lead the resource indices.
    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn catalog(&self) -> &ProcessCatalog {
        &self.catalog
    }

    pub fn n_operands(&self) -> usize {
        self.operands.len()
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    pub fn n_buffers(&self) -> usize {
        self.n_buffers
    }

    pub fn n_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn n_transform(&self) -> usize {
        self.catalog.transform.len()
    }

    pub fn n_holding(&self) -> usize {
        self.catalog.holding.len()
    }

    pub fn n_transport(&self) -> usize {
        self.n_buffers * self.n_buffers
    }

    pub fn n_refined(&self) -> usize {
        self.n_holding() * self.n_transport()
    }

    /// Total system process count: transformation processes followed by
    /// refined transportation processes.
    pub fn n_processes(&self) -> usize {
        self.n_transform() + self.n_refined()
    }

    pub fn j_m(&self) -> &BoolMatrix {
        &self.j_m
    }

    pub fn j_gamma(&self) -> &BoolMatrix {
        &self.j_gamma
    }

    pub fn j_h(&self) -> &BoolMatrix {
        &self.j_h
    }

    pub fn k_m(&self) -> &BoolMatrix {
        &self.k_m
    }

    pub fn k_hbar(&self) -> &BoolMatrix {
        &self.k_hbar
    }

    pub fn a_p_override(&self) -> Option<&BoolMatrix> {
        self.a_p_override.as_ref()
    }

    /// Whether holding processes are declared to map 1-to-1 onto operands
    /// (the precondition of the multi-commodity reconstruction).
    pub fn holding_is_operand(&self) -> bool {
        self.holding_is_operand
    }

    pub fn m_lp_mu_minus(&self) -> &BoolMatrix {
        &self.m_lp_mu_minus
    }

    pub fn m_lp_mu_plus(&self) -> &BoolMatrix {
        &self.m_lp_mu_plus
    }

    pub fn m_lp_gamma_minus(&self) -> &BoolMatrix {
        &self.m_lp_gamma_minus
    }

    pub fn m_lp_gamma_plus(&self) -> &BoolMatrix {
        &self.m_lp_gamma_plus
    }

    /// Refined transportation knowledge base `J_Hbar = J_gamma (*) J_H`.
    pub fn j_hbar(&self) -> BoolMatrix {
        knowledge::assemble_jhbar(&self.j_gamma, &self.j_h)
            .expect("shapes validated at construction")
    }

    /// Assembled system knowledge base `J_S`.
    pub fn j_s(&self) -> BoolMatrix {
        knowledge::assemble_js(&self.j_m, &self.j_hbar())
            .expect("shapes validated at construction")
    }

    /// Assembled system constraints matrix `K_S`.
    pub fn k_s(&self) -> BoolMatrix {
        knowledge::assemble_ks(&self.k_m, &self.k_hbar)
            .expect("shapes validated at construction")
    }

    /// System concept `A_S = J_S (-) K_S`.
    pub fn a_s(&self) -> BoolMatrix {
        knowledge::system_concept(&self.j_s(), &self.k_s())
            .expect("shapes validated at construction")
    }

    /// Human-readable id of a system process row `w` (0-based).
    pub fn process_label(&self, w: usize) -> String {
        if w < self.n_transform() {
            self.catalog.transform[w].id.clone()
        } else {
            let phi = w - self.n_transform();
            let n_eta = self.n_transport();
            let g = phi / n_eta;
            let u = phi % n_eta;
            let y1 = u / self.n_buffers;
            let y2 = u % self.n_buffers;
            format!(
                "{}:{}->{}",
                self.catalog.holding[g].id, self.resources[y1].id, self.resources[y2].id
            )
        }
    }
}
