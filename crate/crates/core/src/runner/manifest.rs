//! Run directories: every file goes through one [`RunWriter`], which
//! records it in the directory's single `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::RunConfig;
use crate::error::Result;
use crate::field::{io, Field, Grid};
use crate::nonlinearity::NonlinearitySpec;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub grid: Grid,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<NonlinearitySpec>,
    /// The resolved config; loading it again reproduces the run.
    pub config: Value,
    /// File names relative to the run directory.
    pub outputs: Vec<String>,
    /// `"ok"` or the name of the error the run ended with.
    pub status: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub artifact_version: String,
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Sole writer of a run directory.
#[derive(Debug)]
pub struct RunWriter {
    dir: PathBuf,
    outputs: Vec<String>,
    started: f64,
}

impl RunWriter {
    /// Creates `dir`. Files listed by a previous manifest there are removed
    /// first so the directory never mixes two runs.
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let old = dir.join(MANIFEST_FILE);
        if let Ok(text) = fs::read_to_string(&old) {
            if let Ok(m) = serde_json::from_str::<RunManifest>(&text) {
                for f in m.outputs {
                    let _ = fs::remove_file(dir.join(f));
                }
            }
            fs::remove_file(old)?;
        }
        Ok(RunWriter {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
            started: now(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, data)?;
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_vec_pretty(value)?;
        text.push(b'\n');
        self.bytes(name, &text)
    }

    pub fn text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        self.bytes(name, text.as_bytes())
    }

    pub fn field(&mut self, name: &str, u: &Field) -> Result<PathBuf> {
        self.bytes(name, &io::to_bytes(u)?)
    }

    /// Writes the manifest and closes the run.
    pub fn finish(self, command: &str, config: &RunConfig, status: &str) -> Result<RunManifest> {
        let manifest = RunManifest {
            command: command.to_string(),
            config_hash: config.hash(),
            seed: config.flow.seed,
            grid: config.grid,
            spec: config.spec.clone(),
            config: config.resolved(),
            outputs: self.outputs,
            status: status.to_string(),
            started_unix: self.started,
            finished_unix: now(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let mut text = serde_json::to_vec_pretty(&manifest)?;
        text.push(b'\n');
        fs::write(self.dir.join(MANIFEST_FILE), text)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lists_every_file_and_replaces_old_runs() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig::from_value(
            serde_json::json!({"family": "pure_power", "ell": 1}),
            Path::new("."),
        )
        .unwrap();
        let mut w = RunWriter::create(tmp.path()).unwrap();
        w.text("a.csv", "x\n1\n").unwrap();
        w.json("b.json", &[1, 2]).unwrap();
        w.text("a.csv", "x\n2\n").unwrap();
        let m = w.finish("demo", &cfg, "ok").unwrap();
        assert_eq!(m.outputs, ["a.csv", "b.json"]);
        let back: RunManifest =
            serde_json::from_str(&fs::read_to_string(tmp.path().join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(back, m);

        let mut w = RunWriter::create(tmp.path()).unwrap();
        w.text("c.csv", "y\n").unwrap();
        w.finish("demo", &cfg, "ok").unwrap();
        let mut names: Vec<_> = fs::read_dir(tmp.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names, ["c.csv", MANIFEST_FILE]);
    }
}
