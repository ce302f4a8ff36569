//! Engineering-system domain types, knowledge-base construction, and
//! degree-of-freedom accounting.

mod capability;
mod indices;
pub mod knowledge;
mod types;

pub use capability::CapabilitySet;
pub use indices::{refined_decompose, refined_index, transport_endpoints, transport_index};
pub use knowledge::{
    assemble_jhbar, assemble_js, assemble_ks, dof_h, dof_m, dof_s, formal_graph, matricize_jh,
    matricize_jhbar, multicommodity, system_concept, tensorize_jh, tensorize_jhbar,
};
pub use types::{
    codes, ModelSpec, Operand, ProcessCatalog, ProcessDef, Resource, ResourceKind, SystemModel,
};
