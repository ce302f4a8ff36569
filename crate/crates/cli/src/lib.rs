//! Library surface of the `hfgt` command-line tool: model-file ingestion,
//! pipeline orchestration, manifests, and exports. The binary in
//! `main.rs` is a thin argument-parsing wrapper over this crate.

pub mod error;
pub mod manifest;
pub mod modelfile;
pub mod pipeline;

pub use error::{CliError, CliResult};
