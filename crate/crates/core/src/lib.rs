//! Hetero-functional graph construction and analysis.
//!
//! The crate takes a declarative engineering-system model (operands,
//! machines, buffers, transporters, processes, capabilities, constraints)
//! to the full family of hetero-functional graph artifacts:
//!
//! * the split knowledge bases, the system knowledge base `J_S`, the
//!   constraints matrix `K_S`, and the system concept `A_S` ([`model`]);
//! * the hetero-functional adjacency matrix `A_rho` by two independent
//!   routes — direct rule evaluation over capability pairs and the
//!   Kronecker closed-form constraint matrices ([`adjacency`]);
//! * the hetero-functional incidence tensors in third-, fourth-, and
//!   matricized second-order form, a third route to the adjacency matrix,
//!   and the dual buffer/operand adjacency tensor ([`incidence`]);
//! * layer classification with selector matrices, per-layer projectors,
//!   and per-layer adjacency ([`layers`]);
//! * directed network descriptors over the capability graph
//!   ([`descriptors`]).
//!
//! Everything rests on exact sparse Boolean matrix and tensor kernels
//! ([`boolmat`]); all values are immutable after construction and safe to
//! share across threads.

pub mod adjacency;
pub mod boolmat;
pub mod descriptors;
mod error;
pub mod incidence;
pub mod layers;
pub mod model;

pub use error::{Error, Result};
