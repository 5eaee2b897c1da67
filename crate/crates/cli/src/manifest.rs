use std::path::Path;
use std::process::Command;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Result;
use gbb_core::ExperimentConfig;
use serde::Serialize;

/// Sidecar written next to every result set.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: &'static str,
    pub git_describe: Option<String>,
    pub started_unix_secs: u64,
    pub wall_time_secs: f64,
    pub outputs: Vec<String>,
    pub config: ExperimentConfig,
}

pub struct RunClock {
    started: SystemTime,
    timer: Instant,
}

impl RunClock {
    pub fn start() -> Self {
        RunClock { started: SystemTime::now(), timer: Instant::now() }
    }

    pub fn finish(&self, command: &str, config: &ExperimentConfig, outputs: Vec<String>) -> Manifest {
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            git_describe: git_describe(),
            started_unix_secs: self.started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            wall_time_secs: self.timer.elapsed().as_secs_f64(),
            outputs,
            config: config.clone(),
        }
    }
}

fn git_describe() -> Option<String> {
    let out = Command::new("git").args(["describe", "--always", "--dirty", "--tags"]).output().ok()?;
    if !out.status.success() {
        return None;
    }
    let s = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (!s.is_empty()).then_some(s)
}

pub fn write(manifest: &Manifest, dir: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}
