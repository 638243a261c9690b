use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use borsuk_core::SatSolver;

/// Provenance attached to every report.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub solver: Option<String>,
    pub solver_banner: Option<String>,
    pub binary_version: String,
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
    pub inputs: Vec<InputDigest>,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, solver: Option<&SatSolver>) -> Self {
        let solver_banner = solver.map(|s| {
            s.banner()
                .unwrap_or_else(|e| format!("c banner unavailable: {e}"))
        });
        RunManifest {
            command: command.to_string(),
            parameters,
            solver: solver.map(|s| s.path().display().to_string()),
            solver_banner,
            binary_version: format!(
                "{} ({})",
                env!("CARGO_PKG_VERSION"),
                env!("BORSUK_GIT_DESCRIBE")
            ),
            started_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            wall_clock_s: 0.0,
            inputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }
}
