//! One JSON manifest per run: what ran, with which resolved settings, on
//! which inputs, producing which outputs.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FILE_NAME: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Arguments after the program name; replaying them re-runs the command.
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

pub fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

pub fn digest(path: &Path) -> Result<FileDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest {
        path: path.to_path_buf(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

/// Collects inputs and outputs while a command runs.
pub struct Recorder {
    command: String,
    argv: Vec<String>,
    started: u128,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
}

impl Recorder {
    /// Starts a run; a config file counts as an input.
    pub fn start(command: &str, argv: Vec<String>, config: Option<&Path>) -> Result<Self> {
        let mut rec = Self {
            command: command.to_string(),
            argv,
            started: now_ms(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        };
        if let Some(c) = config {
            rec.input(c)?;
        }
        Ok(rec)
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(digest(path)?);
        Ok(())
    }

    /// Writes `contents` to `path` and records its digest.
    pub fn output(&mut self, path: &Path, contents: &str) -> Result<()> {
        std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(digest(path)?);
        Ok(())
    }

    pub fn finish(self, out_dir: &Path, config: &impl Serialize, seed: u64) -> Result<Manifest> {
        let manifest = Manifest {
            command: self.command,
            argv: self.argv,
            config: serde_json::to_value(config)?,
            seed,
            inputs: self.inputs,
            outputs: self.outputs,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: self.started,
            finished_unix_ms: now_ms(),
        };
        let path = out_dir.join(FILE_NAME);
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(manifest)
    }
}
