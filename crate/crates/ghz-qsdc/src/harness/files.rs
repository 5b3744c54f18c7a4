//! Config loading and result persistence.
//!
//! Config files are TOML with the [`ExperimentSpec`] schema:
//!
//! ```toml
//! trials = 200
//! metrics = ["check-error-rate", "detection-probability"]
//!
//! [session]
//! parties = 3
//! groups = 40
//! check_count = 20
//! seed = 42
//!
//! [adversary]
//! kind = "intercept-resend"
//! targets = [1, 2]
//! fakes = ["zero", "one"]
//! ```
//!
//! Per-trial records persist as JSON lines; aggregates as CSV with a
//! header row. Every record and row carries the config digest and master
//! seed, and identical specs write identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use super::{ExperimentOutcome, ExperimentSpec, HarnessError, StatsRecord, SweepRow};

/// Environment variable naming the default config directory.
pub const CONFIG_DIR_ENV: &str = "QSDC_CONFIG_DIR";

/// Resolve a config path: an explicit path that exists wins; otherwise a
/// relative path is retried under `$QSDC_CONFIG_DIR`; no path at all means
/// `$QSDC_CONFIG_DIR/default.toml`.
pub fn resolve_config_path(arg: Option<&Path>) -> Result<PathBuf, HarnessError> {
    let dir = std::env::var_os(CONFIG_DIR_ENV).map(PathBuf::from);
    match arg {
        Some(path) => {
            if path.exists() {
                return Ok(path.to_path_buf());
            }
            if path.is_relative() {
                if let Some(dir) = dir {
                    let joined = dir.join(path);
                    if joined.exists() {
                        return Ok(joined);
                    }
                }
            }
            Err(HarnessError::Config {
                path: path.display().to_string(),
                message: "file not found".to_string(),
            })
        }
        None => {
            let dir = dir.ok_or_else(|| HarnessError::Config {
                path: "<none>".to_string(),
                message: format!("no --config given and {CONFIG_DIR_ENV} is unset"),
            })?;
            let path = dir.join("default.toml");
            if path.exists() {
                Ok(path)
            } else {
                Err(HarnessError::Config {
                    path: path.display().to_string(),
                    message: "file not found".to_string(),
                })
            }
        }
    }
}

/// Load and parse an experiment spec from a TOML file.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    toml::from_str(&text).map_err(|e| HarnessError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| HarnessError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
        }
    }
    fs::write(path, contents).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Write one JSON object per trial.
pub fn write_trials_jsonl(path: &Path, outcome: &ExperimentOutcome) -> Result<(), HarnessError> {
    let mut text = String::new();
    for record in &outcome.trials {
        text.push_str(&serde_json::to_string(record).expect("record serializes"));
        text.push('\n');
    }
    write_atomic(path, &text)
}

const STATS_HEADER: &str = "metric,estimate,std_error,trials,config_digest,seed";

fn stats_row(r: &StatsRecord) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.metric, r.estimate, r.std_error, r.trials, r.config_digest, r.seed
    )
}

/// Write aggregated records as a CSV table.
pub fn write_stats_csv(path: &Path, records: &[StatsRecord]) -> Result<(), HarnessError> {
    let mut text = String::from(STATS_HEADER);
    text.push('\n');
    for r in records {
        text.push_str(&stats_row(r));
        text.push('\n');
    }
    write_atomic(path, &text)
}

/// Write a sweep as a CSV table, one row per (value, metric).
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), HarnessError> {
    let mut text = format!("parameter,value,{STATS_HEADER}\n");
    for row in rows {
        for r in &row.records {
            text.push_str(&format!("{},{},{}\n", row.parameter, row.value, stats_row(r)));
        }
    }
    write_atomic(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AdversarySpec;
    use crate::protocol::SessionConfig;

    #[test]
    fn toml_round_trip() {
        let spec = ExperimentSpec::new(SessionConfig::new(3, 8, 4, 7), AdversarySpec::None, 5);
        let text = toml::to_string(&spec).unwrap();
        let back: ExperimentSpec = toml::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let text = r#"
            [session]
            parties = 3
            groups = 10
            check_count = 4
            seed = 1

            [adversary]
            kind = "disturbance"
            mode = "measure-z"
            p = 0.5
        "#;
        let spec: ExperimentSpec = toml::from_str(text).unwrap();
        assert_eq!(spec.trials, 1);
        assert!(spec.metrics.is_empty());
        assert_eq!(spec.session.reveal_fraction, 0.1);
        assert!(matches!(spec.adversary, AdversarySpec::Disturbance(_)));
    }

    #[test]
    fn unknown_session_fields_rejected() {
        let text = r#"
            [session]
            parties = 3
            groups = 10
            check_count = 4
            seed = 1
            bogus = true
        "#;
        assert!(toml::from_str::<ExperimentSpec>(text).is_err());
    }

    #[test]
    fn missing_config_file_is_a_config_error() {
        let err = load_spec(Path::new("/nonexistent/nope.toml")).unwrap_err();
        assert!(matches!(err, HarnessError::Config { .. }));
    }
}
