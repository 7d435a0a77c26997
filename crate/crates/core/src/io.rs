//! Artifact writing: float formatting, JSON files and run manifests.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Shortest round-trip representation; exponent form for very large or very
/// small magnitudes.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq)]
pub struct ArtifactEntry {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

/// `manifest.json`: parameter echo, creation time and artifact checksums.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub created_unix: u64,
    pub artifacts: Vec<ArtifactEntry>,
}

impl Manifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            parameters,
            created_unix,
            artifacts: Vec::new(),
        }
    }

    /// Records a file that already exists in `dir`.
    pub fn record(&mut self, dir: &Path, file: &str) -> Result<()> {
        let bytes = std::fs::read(dir.join(file))?;
        self.artifacts.push(ArtifactEntry {
            file: file.to_string(),
            bytes: bytes.len() as u64,
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }

    /// Files whose contents no longer match their recorded checksum.
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.artifacts
            .iter()
            .filter(|a| match std::fs::read(dir.join(&a.file)) {
                Ok(b) => sha256_hex(&b) != a.sha256 || b.len() as u64 != a.bytes,
                Err(_) => true,
            })
            .map(|a| a.file.clone())
            .collect()
    }
}
