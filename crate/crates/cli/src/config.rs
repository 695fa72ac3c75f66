//! Optional TOML config file. Command-line flags override it, and it
//! overrides the built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, Result};

pub const SEED_ENV: &str = "PREEMPT_LOSS_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub servers: Option<usize>,
    pub load: Option<f64>,
    pub rates: Option<Vec<f64>>,
    pub mu: Option<f64>,
    pub format: Option<String>,
    pub dist: Option<String>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub arrivals: Option<u64>,
    pub warmup: Option<f64>,
    pub victim: Option<String>,
    pub classes: Option<usize>,
    pub points: Option<usize>,
    pub dists: Option<Vec<String>>,
    pub output_dir: Option<PathBuf>,
    pub log_y: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Seed from the config file, then the environment, then the default.
    pub fn default_seed(&self) -> Result<u64> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned 64-bit integer"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}
