//! Provenance record embedded in every JSON output.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use fewnomial_core::BlockRegistry;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct BlockVersion {
    pub id: String,
    pub version: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Subcommand and its semantic arguments; paths are left out.
    pub command: BTreeMap<String, Value>,
    /// sha256 of each input file, keyed by role.
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub blocks: Vec<BlockVersion>,
    /// Seconds since the epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        let mut command = BTreeMap::new();
        command.insert("subcommand".to_string(), Value::from(subcommand));
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: BTreeMap::new(),
            precision: None,
            blocks: Vec::new(),
            timestamp: timestamp(),
        }
    }

    pub fn arg(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.command.insert(name.to_string(), value.into());
        self
    }

    pub fn input(mut self, role: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(role.to_string(), sha256_hex(bytes));
        self
    }

    pub fn precision(mut self, p: u32) -> Self {
        self.precision = Some(p);
        self
    }

    pub fn blocks(mut self, registry: &BlockRegistry) -> Self {
        self.blocks = registry
            .iter()
            .map(|b| BlockVersion { id: b.id().to_string(), version: b.version() })
            .collect();
        self
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return t;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
