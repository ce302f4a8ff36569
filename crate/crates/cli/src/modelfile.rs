//! The declarative model file and its ingestion into a validated
//! [`SystemModel`].
//!
//! Models are TOML documents with sections for operands, the three
//! resource kinds, the declared processes, capability triples, constraint
//! triples, and options. Capabilities reference resources by id;
//! transportation capabilities are declared as (resource, origin,
//! destination) and compiled to knowledge-base rows internally.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use hfgt::boolmat::BoolMatrix;
use hfgt::model::{
    codes, ModelSpec, Operand, ProcessDef, Resource, ResourceKind, SystemModel,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default)]
    pub operands: Vec<OperandDecl>,
    #[serde(default)]
    pub machines: Vec<ResourceDecl>,
    #[serde(default)]
    pub independent_buffers: Vec<ResourceDecl>,
    #[serde(default)]
    pub transporters: Vec<ResourceDecl>,
    #[serde(default)]
    pub transformation_processes: Vec<TransformDecl>,
    #[serde(default)]
    pub holding_processes: Vec<HoldingDecl>,
    #[serde(default)]
    pub capabilities: CapabilityDecls,
    #[serde(default)]
    pub constraints: ConstraintDecls,
    #[serde(default)]
    pub options: OptionDecls,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperandDecl {
    pub id: String,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceDecl {
    pub id: String,
    #[serde(default)]
    pub location: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDecl {
    pub id: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    /// Machines eligible to host this process; unioned with the explicit
    /// capability triples.
    #[serde(default)]
    pub host_machines: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoldingDecl {
    pub id: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapabilityDecls {
    #[serde(default)]
    pub transform: Vec<TransformCapability>,
    #[serde(default)]
    pub holding: Vec<HoldingCapability>,
    #[serde(default)]
    pub transport: Vec<TransportCapability>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformCapability {
    pub process: String,
    pub machine: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoldingCapability {
    pub process: String,
    pub resource: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportCapability {
    pub resource: String,
    pub origin: String,
    pub destination: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDecls {
    #[serde(default)]
    pub transform: Vec<TransformCapability>,
    #[serde(default)]
    pub transport: Vec<TransportConstraint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportConstraint {
    pub resource: String,
    pub holding: String,
    pub origin: String,
    pub destination: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionDecls {
    #[serde(default)]
    pub holding_is_operand: bool,
    #[serde(default)]
    pub a_p_override: Vec<ApEdge>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApEdge {
    pub from: String,
    pub to: String,
}

fn dangling(section: &str, id: &str) -> CliError {
    CliError::validation(format!(
        "[{}] {section} references undeclared id `{id}`",
        codes::DANGLING_REFERENCE
    ))
}

struct Indices<'a> {
    operands: BTreeMap<&'a str, usize>,
    resources: BTreeMap<&'a str, usize>,
    buffers: BTreeMap<&'a str, usize>,
    machines: BTreeMap<&'a str, usize>,
    transform: BTreeMap<&'a str, usize>,
    holding: BTreeMap<&'a str, usize>,
}

fn operand_set(
    idx: &Indices,
    ids: &[String],
    owner: &str,
) -> CliResult<Vec<usize>> {
    ids.iter()
        .map(|id| {
            idx.operands
                .get(id.as_str())
                .copied()
                .ok_or_else(|| dangling(owner, id))
        })
        .collect()
}

/// Parses and validates a model file into a [`SystemModel`].
pub fn ingest(path: &Path) -> CliResult<SystemModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let file: ModelFile = toml::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: schema violation: {e}", path.display())))?;
    build_model(&file)
}

pub fn build_model(file: &ModelFile) -> CliResult<SystemModel> {
    let idx = Indices {
        operands: file
            .operands
            .iter()
            .enumerate()
            .map(|(i, o)| (o.id.as_str(), i))
            .collect(),
        resources: BTreeMap::new(),
        buffers: BTreeMap::new(),
        machines: BTreeMap::new(),
        transform: file
            .transformation_processes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), i))
            .collect(),
        holding: file
            .holding_processes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), i))
            .collect(),
    };
    let mut idx = idx;
    // Canonical resource order: machines, independent buffers, transporters.
    let n_m = file.machines.len();
    let n_b = file.independent_buffers.len();
    for (i, r) in file.machines.iter().enumerate() {
        idx.resources.insert(r.id.as_str(), i);
        idx.buffers.insert(r.id.as_str(), i);
        idx.machines.insert(r.id.as_str(), i);
    }
    for (i, r) in file.independent_buffers.iter().enumerate() {
        idx.resources.insert(r.id.as_str(), n_m + i);
        idx.buffers.insert(r.id.as_str(), n_m + i);
    }
    for (i, r) in file.transporters.iter().enumerate() {
        idx.resources.insert(r.id.as_str(), n_m + n_b + i);
    }
    let n_bs = n_m + n_b;
    let n_r = idx.resources.len();

    let transform: Vec<ProcessDef> = file
        .transformation_processes
        .iter()
        .map(|p| {
            Ok(ProcessDef::new(
                p.id.clone(),
                operand_set(&idx, &p.inputs, &format!("transformation process `{}`", p.id))?,
                operand_set(&idx, &p.outputs, &format!("transformation process `{}`", p.id))?,
            ))
        })
        .collect::<CliResult<_>>()?;
    let holding: Vec<ProcessDef> = file
        .holding_processes
        .iter()
        .map(|p| {
            Ok(ProcessDef::new(
                p.id.clone(),
                operand_set(&idx, &p.inputs, &format!("holding process `{}`", p.id))?,
                operand_set(&idx, &p.outputs, &format!("holding process `{}`", p.id))?,
            ))
        })
        .collect::<CliResult<_>>()?;

    // J_M: host_machines declarations unioned with capability triples.
    let mut jm_entries: Vec<(usize, usize)> = Vec::new();
    for (w, p) in file.transformation_processes.iter().enumerate() {
        for host in &p.host_machines {
            let &v = idx.machines.get(host.as_str()).ok_or_else(|| {
                if idx.resources.contains_key(host.as_str()) {
                    CliError::validation(format!(
                        "[{}] transformation process `{}` hosted on `{host}`, which is not a machine",
                        codes::TRANSFORM_HOST, p.id
                    ))
                } else {
                    dangling(&format!("transformation process `{}`", p.id), host)
                }
            })?;
            jm_entries.push((w, v));
        }
    }
    for cap in &file.capabilities.transform {
        let &w = idx
            .transform
            .get(cap.process.as_str())
            .ok_or_else(|| dangling("transform capability", &cap.process))?;
        let &v = idx.machines.get(cap.machine.as_str()).ok_or_else(|| {
            if idx.resources.contains_key(cap.machine.as_str()) {
                CliError::validation(format!(
                    "[{}] transform capability for `{}` names `{}`, which is not a machine",
                    codes::TRANSFORM_HOST,
                    cap.process,
                    cap.machine
                ))
            } else {
                dangling("transform capability", &cap.machine)
            }
        })?;
        jm_entries.push((w, v));
    }
    let j_m = BoolMatrix::from_entries(transform.len(), n_m, jm_entries)
        .map_err(|e| CliError::validation(e.to_string()))?;

    let mut jg_entries = Vec::new();
    for cap in &file.capabilities.holding {
        let &g = idx
            .holding
            .get(cap.process.as_str())
            .ok_or_else(|| dangling("holding capability", &cap.process))?;
        let &v = idx
            .resources
            .get(cap.resource.as_str())
            .ok_or_else(|| dangling("holding capability", &cap.resource))?;
        jg_entries.push((g, v));
    }
    let j_gamma = BoolMatrix::from_entries(holding.len(), n_r, jg_entries)
        .map_err(|e| CliError::validation(e.to_string()))?;

    let mut jh_entries = Vec::new();
    for cap in &file.capabilities.transport {
        let &v = idx
            .resources
            .get(cap.resource.as_str())
            .ok_or_else(|| dangling("transport capability", &cap.resource))?;
        let &y1 = idx
            .buffers
            .get(cap.origin.as_str())
            .ok_or_else(|| dangling("transport capability origin", &cap.origin))?;
        let &y2 = idx
            .buffers
            .get(cap.destination.as_str())
            .ok_or_else(|| dangling("transport capability destination", &cap.destination))?;
        jh_entries.push((y1 * n_bs + y2, v));
    }
    let j_h = BoolMatrix::from_entries(n_bs * n_bs, n_r, jh_entries)
        .map_err(|e| CliError::validation(e.to_string()))?;

    let mut km_entries = Vec::new();
    for con in &file.constraints.transform {
        let &w = idx
            .transform
            .get(con.process.as_str())
            .ok_or_else(|| dangling("transform constraint", &con.process))?;
        let &v = idx
            .machines
            .get(con.machine.as_str())
            .ok_or_else(|| dangling("transform constraint", &con.machine))?;
        km_entries.push((w, v));
    }
    let k_m = BoolMatrix::from_entries(transform.len(), n_m, km_entries)
        .map_err(|e| CliError::validation(e.to_string()))?;

    let n_eta = n_bs * n_bs;
    let mut kh_entries = Vec::new();
    for con in &file.constraints.transport {
        let &v = idx
            .resources
            .get(con.resource.as_str())
            .ok_or_else(|| dangling("transport constraint", &con.resource))?;
        let &g = idx
            .holding
            .get(con.holding.as_str())
            .ok_or_else(|| dangling("transport constraint", &con.holding))?;
        let &y1 = idx
            .buffers
            .get(con.origin.as_str())
            .ok_or_else(|| dangling("transport constraint origin", &con.origin))?;
        let &y2 = idx
            .buffers
            .get(con.destination.as_str())
            .ok_or_else(|| dangling("transport constraint destination", &con.destination))?;
        kh_entries.push((g * n_eta + y1 * n_bs + y2, v));
    }
    let k_hbar = BoolMatrix::from_entries(holding.len() * n_eta, n_r, kh_entries)
        .map_err(|e| CliError::validation(e.to_string()))?;

    let n_p = transform.len() + holding.len() * n_eta;
    let a_p_override = if file.options.a_p_override.is_empty() {
        None
    } else {
        let mut entries = Vec::new();
        let lookup = |id: &str| -> CliResult<Vec<usize>> {
            // An override edge may name a transformation process, or a
            // holding process meaning all of its refined transports.
            if let Some(&w) = idx.transform.get(id) {
                Ok(vec![w])
            } else if let Some(&g) = idx.holding.get(id) {
                Ok((0..n_eta).map(|u| transform.len() + g * n_eta + u).collect())
            } else {
                Err(dangling("a_p_override", id))
            }
        };
        for edge in &file.options.a_p_override {
            for w1 in lookup(&edge.from)? {
                for w2 in lookup(&edge.to)? {
                    entries.push((w1, w2));
                }
            }
        }
        Some(
            BoolMatrix::from_entries(n_p, n_p, entries)
                .map_err(|e| CliError::validation(e.to_string()))?,
        )
    };

    let spec = ModelSpec {
        operands: file
            .operands
            .iter()
            .map(|o| {
                let mut op = Operand::new(o.id.clone());
                if let Some(name) = &o.name {
                    op.name = name.clone();
                }
                op
            })
            .collect(),
        machines: file
            .machines
            .iter()
            .map(|r| {
                let mut res = Resource::new(r.id.clone(), ResourceKind::Machine);
                res.location = r.location.clone();
                res
            })
            .collect(),
        independent_buffers: file
            .independent_buffers
            .iter()
            .map(|r| {
                let mut res = Resource::new(r.id.clone(), ResourceKind::IndependentBuffer);
                res.location = r.location.clone();
                res
            })
            .collect(),
        transporters: file
            .transporters
            .iter()
            .map(|r| {
                let mut res = Resource::new(r.id.clone(), ResourceKind::Transporter);
                res.location = r.location.clone();
                res
            })
            .collect(),
        transform,
        holding,
        j_m: Some(j_m),
        j_gamma: Some(j_gamma),
        j_h: Some(j_h),
        k_m: Some(k_m),
        k_hbar: Some(k_hbar),
        a_p_override,
        holding_is_operand: file.options.holding_is_operand,
    };
    SystemModel::new(spec).map_err(CliError::from)
}
