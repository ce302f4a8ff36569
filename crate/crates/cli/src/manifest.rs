//! Run manifests: enough provenance to reproduce a run bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub input_file: String,
    pub input_sha256: String,
    /// Chosen options, sorted by key.
    pub options: BTreeMap<String, String>,
    /// Output inventory, sorted by file name.
    pub outputs: BTreeMap<String, OutputRecord>,
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub bytes: u64,
    pub sha256: String,
}

pub fn sha256_hex(data: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

impl RunManifest {
    pub fn new(input_file: &Path, input_bytes: &[u8]) -> Self {
        RunManifest {
            tool: "hfgt".to_string(),
            tool_version: TOOL_VERSION.to_string(),
            input_file: input_file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| input_file.display().to_string()),
            input_sha256: sha256_hex(input_bytes),
            options: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn set_option(&mut self, key: &str, value: impl Into<String>) {
        self.options.insert(key.to_string(), value.into());
    }

    pub fn record_output(&mut self, name: &str, contents: &[u8]) {
        self.outputs.insert(
            name.to_string(),
            OutputRecord {
                bytes: contents.len() as u64,
                sha256: sha256_hex(contents),
            },
        );
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self)
            .expect("manifest serialization cannot fail");
        std::fs::write(dir.join("manifest.json"), json + "\n")?;
        Ok(())
    }
}
