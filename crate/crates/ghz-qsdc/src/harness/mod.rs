//! Seeded Monte Carlo experiments over sessions.
//!
//! An [`ExperimentSpec`] bundles a session template, an adversary, a trial
//! count, and the metrics to estimate. Trial `i` runs with seed
//! `derive_seed(master, "trial", i)` and a plan drawn from that trial's
//! own stream, so experiments are reproducible bit for bit and trials are
//! independent. Aggregation is an ordered reduction over trial index, so
//! results do not depend on execution order.

mod experiment;
mod files;
mod selftest;
mod sweep;

pub use experiment::{run_experiment, ExperimentOutcome, Metric, StatsRecord, TrialRecord};
pub use files::{
    load_spec, resolve_config_path, write_stats_csv, write_sweep_csv, write_trials_jsonl,
    CONFIG_DIR_ENV,
};
pub use selftest::{run_selftest, SelfTestResult};
pub use sweep::{detection_curve, SweepParameter, SweepRow};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::adversary::AdversarySpec;
use crate::protocol::{ProtocolError, SessionConfig};

/// Errors from loading, running, or persisting experiments.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("unknown sweep parameter {0:?} (expected M, p, rho, or trials)")]
    UnknownParameter(String),
    #[error("sweep parameter {parameter} needs {needs}")]
    ParameterMismatch {
        parameter: &'static str,
        needs: &'static str,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Where an experiment's files go, when run through the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputConfig {
    /// Directory receiving `trials.jsonl` and `stats.csv` / `sweep.csv`.
    pub dir: PathBuf,
}

fn default_trials() -> u64 {
    1
}

/// A batch experiment: which sessions to run and what to estimate.
///
/// `session.seed` is the experiment's master seed; every trial derives
/// from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub session: SessionConfig,
    #[serde(default = "AdversarySpec::none")]
    pub adversary: AdversarySpec,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Metrics to aggregate; an empty list means all of them.
    #[serde(default)]
    pub metrics: Vec<Metric>,
    /// Output destination; not part of the config digest.
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

impl ExperimentSpec {
    pub fn new(session: SessionConfig, adversary: AdversarySpec, trials: u64) -> Self {
        ExperimentSpec {
            session,
            adversary,
            trials,
            metrics: Vec::new(),
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config {
                path: "<spec>".to_string(),
                message: "trials must be >= 1".to_string(),
            });
        }
        self.session.validate()?;
        self.adversary
            .validate()
            .map_err(ProtocolError::InvalidConfig)?;
        Ok(())
    }

    /// The metrics this experiment reports.
    pub fn effective_metrics(&self) -> Vec<Metric> {
        if self.metrics.is_empty() {
            Metric::ALL.to_vec()
        } else {
            self.metrics.clone()
        }
    }

    /// Stable digest of the science-relevant fields (everything except
    /// `output`), hex-encoded.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let normalized = ExperimentSpec {
            output: None,
            ..self.clone()
        };
        let json = serde_json::to_string(&normalized).expect("spec serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl AdversarySpec {
    fn none() -> Self {
        AdversarySpec::None
    }
}
