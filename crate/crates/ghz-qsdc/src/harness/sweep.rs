//! Parameter sweeps: the same experiment across a list of values.

use serde::{Deserialize, Serialize};

use super::{run_experiment, ExperimentSpec, HarnessError, StatsRecord};
use crate::adversary::AdversarySpec;

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    /// Check-subset size M.
    CheckCount,
    /// Disturbance action probability p.
    DisturbanceP,
    /// Reveal fraction rho.
    RevealFraction,
    /// Trial count.
    Trials,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::CheckCount => "M",
            SweepParameter::DisturbanceP => "p",
            SweepParameter::RevealFraction => "rho",
            SweepParameter::Trials => "trials",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" | "m" | "check-count" => Ok(SweepParameter::CheckCount),
            "p" | "disturbance-p" => Ok(SweepParameter::DisturbanceP),
            "rho" | "ρ" | "reveal-fraction" => Ok(SweepParameter::RevealFraction),
            "trials" => Ok(SweepParameter::Trials),
            other => Err(HarnessError::UnknownParameter(other.to_string())),
        }
    }
}

/// Aggregated records for one sweep value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: &'static str,
    pub value: f64,
    pub records: Vec<StatsRecord>,
}

/// Run the experiment once per value of the swept parameter.
pub fn detection_curve(
    spec: &ExperimentSpec,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<SweepRow>, HarnessError> {
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut point = spec.clone();
        apply(&mut point, parameter, value)?;
        let outcome = run_experiment(&point)?;
        rows.push(SweepRow {
            parameter: parameter.name(),
            value,
            records: outcome.stats,
        });
    }
    Ok(rows)
}

fn apply(
    spec: &mut ExperimentSpec,
    parameter: SweepParameter,
    value: f64,
) -> Result<(), HarnessError> {
    match parameter {
        SweepParameter::CheckCount => {
            spec.session.check_count = value as u32;
        }
        SweepParameter::DisturbanceP => match &mut spec.adversary {
            AdversarySpec::Disturbance(cfg) => cfg.p = value,
            _ => {
                return Err(HarnessError::ParameterMismatch {
                    parameter: "p",
                    needs: "a disturbance adversary",
                })
            }
        },
        SweepParameter::RevealFraction => {
            spec.session.reveal_fraction = value;
        }
        SweepParameter::Trials => {
            spec.trials = value as u64;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{DisturbanceConfig, DisturbanceMode};
    use crate::protocol::SessionConfig;

    #[test]
    fn parameter_parsing() {
        assert_eq!("M".parse::<SweepParameter>().unwrap(), SweepParameter::CheckCount);
        assert_eq!("p".parse::<SweepParameter>().unwrap(), SweepParameter::DisturbanceP);
        assert_eq!("rho".parse::<SweepParameter>().unwrap(), SweepParameter::RevealFraction);
        assert_eq!("trials".parse::<SweepParameter>().unwrap(), SweepParameter::Trials);
        assert!(matches!(
            "bogus".parse::<SweepParameter>(),
            Err(HarnessError::UnknownParameter(_))
        ));
    }

    #[test]
    fn sweeping_p_requires_disturbance() {
        let spec = ExperimentSpec::new(SessionConfig::new(3, 6, 2, 1), AdversarySpec::None, 2);
        assert!(matches!(
            detection_curve(&spec, SweepParameter::DisturbanceP, &[0.5]),
            Err(HarnessError::ParameterMismatch { .. })
        ));
        let spec = ExperimentSpec::new(
            SessionConfig::new(3, 6, 2, 1),
            AdversarySpec::Disturbance(DisturbanceConfig::new(DisturbanceMode::ApplyIy, 0.0)),
            2,
        );
        let rows = detection_curve(&spec, SweepParameter::DisturbanceP, &[0.0, 1.0]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].parameter, "p");
    }

    #[test]
    fn sweeping_trials_changes_sample_count() {
        let spec = ExperimentSpec::new(SessionConfig::new(3, 6, 2, 3), AdversarySpec::None, 1);
        let rows = detection_curve(&spec, SweepParameter::Trials, &[2.0, 5.0]).unwrap();
        let sessions = |row: &SweepRow| {
            row.records
                .iter()
                .find(|r| r.metric == "detection-probability")
                .unwrap()
                .trials
        };
        assert_eq!(sessions(&rows[0]), 2);
        assert_eq!(sessions(&rows[1]), 5);
    }
}
