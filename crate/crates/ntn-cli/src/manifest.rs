//! Run manifests: a JSON record of the resolved configuration, seed, tool
//! version, wall-clock duration, and a SHA-256 checksum per output file.
//! Feeding a manifest back as `--config` re-runs the identical
//! configuration and reproduces the outputs byte-for-byte.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::{CliError, Result};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub config: serde_json::Map<String, serde_json::Value>,
    pub seed: u64,
    pub duration_seconds: f64,
    pub outputs: serde_json::Map<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &[&str], config: &Config, seed: u64) -> Self {
        let mut snapshot = serde_json::Map::new();
        for (k, v) in config.entries() {
            snapshot.insert(k.to_string(), serde_json::Value::String(v.to_string()));
        }
        RunManifest {
            tool: "ntn",
            version: env!("CARGO_PKG_VERSION"),
            command: command.iter().map(|s| s.to_string()).collect(),
            config: snapshot,
            seed,
            duration_seconds: 0.0,
            outputs: serde_json::Map::new(),
        }
    }

    /// Records an output file's checksum under its file name.
    pub fn add_output(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.insert(
            name,
            serde_json::Value::String(format!("sha256:{}", hex_string(&digest))),
        );
        Ok(())
    }

    /// Writes the manifest next to the outputs.
    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        crate::output::write_atomic(path, json.as_bytes())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_records_config_and_checksums() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("data.csv");
        std::fs::write(&out, b"a,b\n1,2\n").unwrap();
        let mut cfg = Config::new();
        cfg.set("seed", 7u64);
        let mut m = RunManifest::new(&["sample"], &cfg, 7);
        m.add_output(&out).unwrap();
        let path = dir.path().join("run.manifest.json");
        m.write(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["tool"], "ntn");
        assert_eq!(v["config"]["seed"], "7");
        let sum = v["outputs"]["data.csv"].as_str().unwrap();
        assert!(sum.starts_with("sha256:"));
        // The manifest is loadable as a config.
        let back = Config::load(&path).unwrap();
        assert_eq!(back.get("seed"), Some("7"));
    }
}
