use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub t_max: f64,
    pub step: f64,
    pub eps_tail: f64,
}

/// Provenance record for one run. `command` is the normalized argument
/// list that reproduces the run; output paths are relative to the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: Vec<String>,
    pub alpha: Vec<f64>,
    pub grid: Option<GridParams>,
    /// Cascade depth / iteration count `n`.
    pub depth: Option<u32>,
    /// Picard depth `k` of the initial function.
    pub picard_k: Option<u32>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Subcommand-specific settings.
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub timestamp: Option<String>,
    /// File name to lowercase hex SHA-256.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            alpha: Vec::new(),
            grid: None,
            depth: None,
            picard_k: None,
            samples: None,
            seed: None,
            parameters: BTreeMap::new(),
            timestamp: None,
            outputs: BTreeMap::new(),
        }
    }

    pub fn set_parameter(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.parameters.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    /// Short digest of the configuration alone: outputs and timestamp are
    /// left out, so it names the run before anything has been written.
    pub fn config_digest(&self) -> Result<String> {
        let bare = RunManifest {
            timestamp: None,
            outputs: BTreeMap::new(),
            ..self.clone()
        };
        let hex = sha256_hex(canonical_json(&bare)?.as_bytes());
        Ok(hex[..16].to_string())
    }

    /// Hash `dir/name` and record it under `name`.
    pub fn record_output(&mut self, dir: &Path, name: &str) -> Result<()> {
        let digest = sha256_file(&dir.join(name))?;
        self.outputs.insert(name.to_string(), digest);
        Ok(())
    }

    pub fn stamp_now(&mut self) {
        self.timestamp = Some(humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string());
    }
}

/// Pretty JSON with sorted object keys and shortest round-trip floats.
pub fn canonical_json(value: &impl Serialize) -> Result<String> {
    // serde_json::Value keeps object keys in a BTreeMap
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_canonical_json(value: &impl Serialize, path: &Path) -> Result<()> {
    std::fs::write(path, canonical_json(value)?).map_err(|e| Error::io(path, e))
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    write_canonical_json(manifest, path)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Re-hash every output listed in the manifest at `path`.
pub fn verify_manifest(path: &Path) -> Result<RunManifest> {
    let manifest = read_manifest(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    for (name, expected) in &manifest.outputs {
        let file = dir.join(name);
        let actual = sha256_file(&file)?;
        if &actual != expected {
            return Err(Error::DigestMismatch {
                path: file,
                expected: expected.clone(),
                actual,
            });
        }
    }
    Ok(manifest)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

/// `<out>/<subcommand>/<config digest>`.
pub fn run_directory(out: &Path, subcommand: &str, manifest: &RunManifest) -> Result<PathBuf> {
    Ok(out.join(subcommand).join(manifest.config_digest()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunManifest {
        let mut m = RunManifest::new(vec!["hist".into(), "--alpha".into(), "1.5".into()]);
        m.alpha = vec![1.5];
        m.seed = Some(42);
        m.grid = Some(GridParams {
            t_max: 8.0,
            step: 0.01,
            eps_tail: 1e-6,
        });
        m.set_parameter("t", 2.0).unwrap();
        m
    }

    #[test]
    fn keys_are_sorted() {
        let text = canonical_json(&sample()).unwrap();
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert!(text.contains("\"step\": 0.01"));
    }

    #[test]
    fn identical_config_identical_manifest_except_timestamp() {
        let mut a = sample();
        let mut b = sample();
        a.stamp_now();
        b.timestamp = Some("1970-01-01T00:00:00Z".into());
        assert_eq!(a.config_digest().unwrap(), b.config_digest().unwrap());
        b.timestamp = a.timestamp.clone();
        assert_eq!(canonical_json(&a).unwrap(), canonical_json(&b).unwrap());
        b.seed = Some(43);
        assert_ne!(a.config_digest().unwrap(), b.config_digest().unwrap());
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("data.csv"), "t,value\n0,1\n").unwrap();
        let mut m = sample();
        m.record_output(dir.path(), "data.csv").unwrap();
        let path = dir.path().join(MANIFEST_FILE);
        write_manifest(&m, &path).unwrap();
        assert_eq!(verify_manifest(&path).unwrap(), m);
        std::fs::write(dir.path().join("data.csv"), "t,value\n0,2\n").unwrap();
        assert!(matches!(verify_manifest(&path), Err(Error::DigestMismatch { .. })));
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
