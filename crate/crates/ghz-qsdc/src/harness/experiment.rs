//! Trial execution and metric aggregation.

use serde::{Deserialize, Serialize};

use super::{ExperimentSpec, HarnessError};
use crate::adversary::eve_information;
use crate::protocol::{run_session, MessagePlan, SessionConfig, SessionStatus};
use crate::quantum::MeasBasis;
use crate::rng::{derive_seed, stream};

/// The quantities an experiment can estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Mean per-session check error rate.
    CheckErrorRate,
    /// Error rate of Z-basis check groups, pooled over all sessions.
    CheckErrorRateZ,
    /// Error rate of X-basis check groups, pooled over all sessions.
    CheckErrorRateX,
    /// Fraction of sessions that aborted (either phase).
    DetectionProbability,
    /// Fraction of message bits every viewpoint recovered correctly,
    /// pooled over sessions that reached decoding.
    MessageFidelity,
    /// Fraction of touched message bits the adversary recovered correctly,
    /// pooled over all sessions.
    EveInformation,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::CheckErrorRate,
        Metric::CheckErrorRateZ,
        Metric::CheckErrorRateX,
        Metric::DetectionProbability,
        Metric::MessageFidelity,
        Metric::EveInformation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::CheckErrorRate => "check-error-rate",
            Metric::CheckErrorRateZ => "check-error-rate-z",
            Metric::CheckErrorRateX => "check-error-rate-x",
            Metric::DetectionProbability => "detection-probability",
            Metric::MessageFidelity => "message-fidelity",
            Metric::EveInformation => "eve-information",
        }
    }
}

/// One aggregated estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub metric: String,
    pub estimate: f64,
    /// Sample standard deviation over the samples behind `trials`,
    /// divided by sqrt(trials).
    pub std_error: f64,
    /// Number of samples: sessions for per-session metrics, pooled groups
    /// or bits for pooled metrics.
    pub trials: u64,
    pub config_digest: String,
    pub seed: u64,
}

/// Per-trial counters, one JSONL line each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub status: SessionStatus,
    pub check_error_rate: f64,
    pub check_groups_z: u64,
    pub check_errors_z: u64,
    pub check_groups_x: u64,
    pub check_errors_x: u64,
    pub decode_bits: u64,
    pub decode_correct: u64,
    pub eve_bits: u64,
    pub eve_correct: u64,
    pub reveal_mismatches: u32,
    pub config_digest: String,
    pub master_seed: u64,
}

/// Everything a finished experiment produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub stats: Vec<StatsRecord>,
    pub trials: Vec<TrialRecord>,
    pub config_digest: String,
    pub master_seed: u64,
}

/// Run `spec.trials` independent seeded sessions and aggregate the
/// requested metrics. Deterministic for a fixed spec.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome, HarnessError> {
    spec.validate()?;
    let digest = spec.digest();
    let master = spec.session.seed;
    let mut trials = Vec::with_capacity(spec.trials as usize);
    for i in 0..spec.trials {
        let trial_seed = derive_seed(master, "trial", i);
        let config = SessionConfig {
            seed: trial_seed,
            ..spec.session.clone()
        };
        let mut plan_rng = stream(trial_seed, "plan", 0);
        let plan = MessagePlan::random(
            config.parties,
            config.message_group_count(),
            &mut plan_rng,
        );
        let result = run_session(&config, &plan, &spec.adversary)?;

        let mut record = TrialRecord {
            trial: i,
            seed: trial_seed,
            status: result.status,
            check_error_rate: result.check_error_rate,
            check_groups_z: 0,
            check_errors_z: 0,
            check_groups_x: 0,
            check_errors_x: 0,
            decode_bits: 0,
            decode_correct: 0,
            eve_bits: 0,
            eve_correct: 0,
            reveal_mismatches: result.reveal.as_ref().map_or(0, |r| r.mismatches),
            config_digest: digest.clone(),
            master_seed: master,
        };
        if let Some(check) = &result.check_report {
            for rec in &check.records {
                match rec.basis {
                    MeasBasis::Z => {
                        record.check_groups_z += 1;
                        record.check_errors_z += u64::from(!rec.consistent);
                    }
                    MeasBasis::X => {
                        record.check_groups_x += 1;
                        record.check_errors_x += u64::from(!rec.consistent);
                    }
                }
            }
        }
        if !result.decoded.is_empty() {
            let (correct, total) = result.fidelity_counts(&plan);
            record.decode_bits = total;
            record.decode_correct = correct;
        }
        if let Some(report) = &result.eve_report {
            let info = eve_information(report, &plan, &result.message_groups);
            let pooled = info.pooled();
            record.eve_bits = pooled.total;
            record.eve_correct = pooled.correct;
        }
        trials.push(record);
    }

    let stats = spec
        .effective_metrics()
        .into_iter()
        .map(|metric| aggregate(metric, &trials, &digest, master))
        .collect();
    Ok(ExperimentOutcome {
        stats,
        trials,
        config_digest: digest,
        master_seed: master,
    })
}

fn aggregate(metric: Metric, trials: &[TrialRecord], digest: &str, seed: u64) -> StatsRecord {
    let (estimate, std_error, count) = match metric {
        Metric::CheckErrorRate => mean_of(trials.iter().map(|t| t.check_error_rate)),
        Metric::DetectionProbability => mean_of(
            trials
                .iter()
                .map(|t| f64::from(t.status != SessionStatus::Completed)),
        ),
        Metric::CheckErrorRateZ => pooled(
            trials.iter().map(|t| (t.check_errors_z, t.check_groups_z)),
        ),
        Metric::CheckErrorRateX => pooled(
            trials.iter().map(|t| (t.check_errors_x, t.check_groups_x)),
        ),
        Metric::MessageFidelity => pooled(
            trials.iter().map(|t| (t.decode_correct, t.decode_bits)),
        ),
        Metric::EveInformation => pooled(
            trials.iter().map(|t| (t.eve_correct, t.eve_bits)),
        ),
    };
    StatsRecord {
        metric: metric.name().to_string(),
        estimate,
        std_error,
        trials: count,
        config_digest: digest.to_string(),
        seed,
    }
}

/// Mean, standard error, and count of per-session values.
fn mean_of(values: impl Iterator<Item = f64>) -> (f64, f64, u64) {
    let values: Vec<f64> = values.collect();
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0, 1);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt(), n as u64)
}

/// Bernoulli rate pooled over (success, count) pairs; standard error from
/// the pooled sample variance.
fn pooled(pairs: impl Iterator<Item = (u64, u64)>) -> (f64, f64, u64) {
    let (mut hits, mut total) = (0u64, 0u64);
    for (h, t) in pairs {
        hits += h;
        total += t;
    }
    if total == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let p = hits as f64 / total as f64;
    if total == 1 {
        return (p, 0.0, 1);
    }
    // Sample variance of the 0/1 indicators, n-1 denominator.
    let var = p * (1.0 - p) * total as f64 / (total as f64 - 1.0);
    (p, (var / total as f64).sqrt(), total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{AdversarySpec, FakePrep, InterceptResendConfig};
    use crate::protocol::SessionConfig;

    fn spec(seed: u64) -> ExperimentSpec {
        ExperimentSpec::new(
            SessionConfig::new(3, 10, 4, seed),
            AdversarySpec::None,
            20,
        )
    }

    #[test]
    fn clean_experiment_reports_zero_error_and_full_fidelity() {
        let outcome = run_experiment(&spec(5)).unwrap();
        let by_name = |name: &str| {
            outcome
                .stats
                .iter()
                .find(|r| r.metric == name)
                .unwrap()
                .clone()
        };
        assert_eq!(by_name("check-error-rate").estimate, 0.0);
        assert_eq!(by_name("message-fidelity").estimate, 1.0);
        assert_eq!(by_name("detection-probability").estimate, 0.0);
        assert!(by_name("eve-information").estimate.is_nan());
        assert_eq!(by_name("message-fidelity").std_error, 0.0);
    }

    #[test]
    fn identical_specs_identical_outcomes() {
        // Compare serialized forms: NaN estimates (metrics with no
        // samples) are not self-equal as floats.
        let a = serde_json::to_string(&run_experiment(&spec(9)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&spec(9)).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = run_experiment(&spec(10)).unwrap();
        assert_ne!(a, serde_json::to_string(&c).unwrap());
        assert_eq!(c.config_digest.len(), 16);
    }

    #[test]
    fn digest_ignores_output_paths() {
        let mut a = spec(1);
        let d1 = a.digest();
        a.output = Some(super::super::OutputConfig {
            dir: "/tmp/somewhere".into(),
        });
        assert_eq!(a.digest(), d1);
    }

    #[test]
    fn intercept_experiment_detects_and_leaks() {
        let mut s = spec(77);
        s.session = SessionConfig::new(3, 12, 8, 77);
        s.trials = 30;
        s.adversary = AdversarySpec::InterceptResend(InterceptResendConfig::all_parties(
            3,
            FakePrep::Random,
        ));
        let outcome = run_experiment(&s).unwrap();
        let detection = outcome
            .stats
            .iter()
            .find(|r| r.metric == "detection-probability")
            .unwrap();
        assert!(detection.estimate > 0.9, "detection {}", detection.estimate);
    }

    #[test]
    fn zero_trials_rejected() {
        let mut s = spec(1);
        s.trials = 0;
        assert!(run_experiment(&s).is_err());
    }
}
