use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command: the resolved flags, the seed and
/// digests of every input. Output location and thread count are left out
/// because they do not influence results.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub params: serde_json::Value,
    pub rng_seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &'static str, params: serde_json::Value) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            params,
            rng_seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, role: &str, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {role} file `{}`", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputDigest {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}
