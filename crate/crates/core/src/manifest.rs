//! Run manifests: what was run, with which config and seed, and the digest
//! of every file it wrote. Replaying a manifest's config reproduces the
//! data files byte for byte; only the timestamps differ.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::RNG_IDENTITY;

pub const CODE_VERSION: &str = concat!("pathweave ", env!("CARGO_PKG_VERSION"));

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand, e.g. `pairs` or `learn-nav`.
    pub command: String,
    /// Effective configuration, after presets and overrides.
    pub config: Value,
    pub seed: u64,
    pub rng: String,
    pub code_version: String,
    pub started_at: String,
    pub finished_at: String,
    /// File name (relative to the manifest) to sha256.
    pub outputs: BTreeMap<String, String>,
    /// False for timing runs, whose outputs differ on every run.
    #[serde(default = "yes")]
    pub deterministic: bool,
}

fn yes() -> bool {
    true
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seed: u64, started_at: String) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            seed,
            rng: RNG_IDENTITY.to_string(),
            code_version: CODE_VERSION.to_string(),
            finished_at: started_at.clone(),
            started_at,
            outputs: BTreeMap::new(),
            deterministic: true,
        }
    }

    pub fn record_output(&mut self, dir: &Path, name: &str) -> Result<()> {
        let digest = file_digest(&dir.join(name))?;
        self.outputs.insert(name.to_string(), digest);
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Names of recorded outputs whose current digest in `dir` differs.
    pub fn mismatched_outputs(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for (name, digest) in &self.outputs {
            let path = dir.join(name);
            if !path.exists() || &file_digest(&path)? != digest {
                bad.push(name.clone());
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn round_trip_and_verify() {
        let dir = std::env::temp_dir().join(format!("pathweave-manifest-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("a.csv"), "x\n1\n").unwrap();
        let mut m = RunManifest::new("pairs", serde_json::json!({"k": 1}), 3, "t0".into());
        m.record_output(&dir, "a.csv").unwrap();
        m.write(&dir.join("manifest.json")).unwrap();
        let back = RunManifest::read(&dir.join("manifest.json")).unwrap();
        assert_eq!(back, m);
        assert!(back.mismatched_outputs(&dir).unwrap().is_empty());
        fs::write(dir.join("a.csv"), "x\n2\n").unwrap();
        assert_eq!(back.mismatched_outputs(&dir).unwrap(), vec!["a.csv"]);
        fs::remove_dir_all(&dir).unwrap();
    }
}
