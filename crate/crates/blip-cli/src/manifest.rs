//! Run manifests: the one place where timestamps live, so result files stay
//! byte-identical across reruns of the same configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::CliResult;

#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub artifact_version: String,
    pub config: Value,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub outputs: Vec<String>,
}

pub struct RunDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl RunDir {
    /// Create the run directory and atomically write the initial manifest
    /// before any result file exists.
    pub fn create(
        out: Option<PathBuf>,
        subcommand: &str,
        config: Value,
        outputs: &[&str],
    ) -> CliResult<Self> {
        let dir = out.unwrap_or_else(|| PathBuf::from("runs").join(subcommand));
        fs::create_dir_all(&dir)?;
        let manifest = RunManifest {
            subcommand: subcommand.to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            started_at: chrono::Utc::now().to_rfc3339(),
            finished_at: None,
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        };
        let run = RunDir { dir, manifest };
        run.write_manifest()?;
        Ok(run)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Atomic replace: write to a temporary sibling, then rename.
    fn write_manifest(&self) -> CliResult<()> {
        let body = serde_json::to_string_pretty(&self.manifest)
            .map_err(std::io::Error::other)?;
        let tmp = self.dir.join("manifest.json.tmp");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, self.dir.join("manifest.json"))?;
        Ok(())
    }

    pub fn write_file(&self, name: &str, body: &[u8]) -> CliResult<PathBuf> {
        let path = self.path(name);
        fs::write(&path, body)?;
        Ok(path)
    }

    /// Stamp the end time and rewrite the manifest.
    pub fn finish(mut self) -> CliResult<PathBuf> {
        self.manifest.finished_at = Some(chrono::Utc::now().to_rfc3339());
        self.write_manifest()?;
        Ok(self.dir)
    }
}

pub fn relative_outputs(dir: &Path, names: &[&str]) -> String {
    names.iter().map(|n| dir.join(n).display().to_string()).collect::<Vec<_>>().join(", ")
}
