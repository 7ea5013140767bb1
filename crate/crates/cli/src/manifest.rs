//! Run manifests: everything needed to regenerate an output file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::Command;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    /// Seed driving any random sampling, when the command has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub run: Command,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(run: Command, outputs: Vec<PathBuf>) -> Self {
        let seed = match &run {
            Command::Measure(a) => Some(a.optimizer.seed),
            Command::Fuzz(a) => Some(a.seed),
            Command::Batch(a) => Some(a.seed),
            _ => None,
        };
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            run,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::parse(path, &e))
    }
}

/// `<out>.manifest.json`.
pub fn default_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
