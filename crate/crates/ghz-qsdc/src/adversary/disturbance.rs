//! The disturbance attack.
//!
//! Eve tampers with particles on their way back to Alice — applying a
//! random I/iY, always applying iY, or measuring in Z — which scrambles or
//! destroys the encoded correlations without teaching her anything: the
//! reduced state of a single particle of a GHZ-derived group is maximally
//! mixed whatever the encoding. Her report therefore carries only uniform
//! guesses for the bits she touched, and the reveal check is what catches
//! the tampering.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::{EveAction, EveBits, EveReport};
use super::{ChannelRefusal, ChannelTap};
use crate::protocol::PartyId;
use crate::quantum::{MeasBasis, PauliOp, QuantumRegistry, QubitLabel};
use crate::rng::StreamRng;

/// What Eve does to a particle she acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisturbanceMode {
    /// Apply an operation drawn uniformly from {I, iY}.
    ApplyRandomOp,
    /// Always apply iY, flipping the carried bit deterministically.
    ApplyIy,
    /// Measure the particle in the Z basis.
    MeasureZ,
}

/// Disturbance parameters: the action and the per-particle probability of
/// taking it. The forward leg is untouched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceConfig {
    pub mode: DisturbanceMode,
    /// Probability of acting on each returning particle.
    pub p: f64,
}

impl DisturbanceConfig {
    pub fn new(mode: DisturbanceMode, p: f64) -> Self {
        DisturbanceConfig { mode, p }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(format!("disturbance probability {} out of [0,1]", self.p));
        }
        Ok(())
    }
}

/// Live state of the attack across a session.
pub struct Disturbance {
    cfg: DisturbanceConfig,
    rng: StreamRng,
    report: EveReport,
}

impl Disturbance {
    pub fn new(cfg: DisturbanceConfig, rng: StreamRng) -> Self {
        Disturbance {
            cfg,
            rng,
            report: EveReport::default(),
        }
    }
}

impl ChannelTap for Disturbance {
    fn forward(
        &mut self,
        _party: PartyId,
        _group: u32,
        label: QubitLabel,
        _registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        Ok(label)
    }

    fn backward(
        &mut self,
        party: PartyId,
        group: u32,
        label: QubitLabel,
        registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        if self.cfg.p <= 0.0 || !self.rng.gen_bool(self.cfg.p) {
            return Ok(label);
        }
        match self.cfg.mode {
            DisturbanceMode::ApplyRandomOp => {
                let op = if self.rng.gen_bool(0.5) {
                    PauliOp::IY
                } else {
                    PauliOp::I
                };
                registry.apply_pauli(label, op).map_err(|_| ChannelRefusal)?;
                self.report.actions.push(EveAction::AppliedOp {
                    group,
                    party: party.0,
                    op,
                });
            }
            DisturbanceMode::ApplyIy => {
                registry
                    .apply_pauli(label, PauliOp::IY)
                    .map_err(|_| ChannelRefusal)?;
                self.report.actions.push(EveAction::AppliedOp {
                    group,
                    party: party.0,
                    op: PauliOp::IY,
                });
            }
            DisturbanceMode::MeasureZ => {
                let outcome = registry
                    .measure_single(label, MeasBasis::Z, &mut self.rng)
                    .map_err(|_| ChannelRefusal)?;
                self.report.actions.push(EveAction::MeasuredZ {
                    group,
                    party: party.0,
                    outcome,
                });
            }
        }
        // Nothing Eve saw correlates with the encoded bit; her best
        // strategy is a uniform guess, logged so the recovery rate can be
        // scored against the truth.
        let guess = self.rng.gen_range(0..2u8);
        self.report.party_bits.push(EveBits {
            group,
            party: party.0,
            bit: guess,
        });
        self.report.actions.push(EveAction::GuessedBit {
            group,
            party: party.0,
            bit: guess,
        });
        Ok(label)
    }

    fn report(&self) -> Option<EveReport> {
        Some(self.report.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AdversarySpec;
    use crate::protocol::{run_session, MessagePlan, SessionConfig, SessionStatus};
    use crate::quantum::pauli_delta;
    use crate::rng::stream;

    #[test]
    fn p_zero_acts_like_the_null_channel() {
        let config = SessionConfig::new(3, 10, 4, 33);
        let mut rng = stream(33, "plan", 0);
        let plan = MessagePlan::random(3, config.message_group_count(), &mut rng);
        let none = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        let spec = AdversarySpec::Disturbance(DisturbanceConfig::new(DisturbanceMode::ApplyIy, 0.0));
        let disturbed = run_session(&config, &plan, &spec).unwrap();
        assert_eq!(none.status, disturbed.status);
        assert_eq!(none.transcript, disturbed.transcript);
        assert!(disturbed.eve_report.unwrap().is_empty());
    }

    #[test]
    fn forced_iy_flips_the_targeted_partys_bit() {
        // One message group, no checks, reveal disabled, p=1: both
        // returning particles get iY, so Alice decodes both bits flipped
        // and the measured label moves by the composed toggles.
        let mut config = SessionConfig::new(3, 1, 0, 8);
        config.reveal_fraction = 0.0;
        config.forced_initial = Some("000".parse().unwrap());
        let plan = MessagePlan::from_bits(&[0, 0], &[vec![0], vec![0]]).unwrap();
        let spec = AdversarySpec::Disturbance(DisturbanceConfig::new(DisturbanceMode::ApplyIy, 1.0));
        let result = run_session(&config, &plan, &spec).unwrap();
        assert_eq!(result.status, SessionStatus::Completed);
        let alice = &result.decoded[0];
        assert_eq!(alice.party_bits(1), vec![Some(1)]);
        assert_eq!(alice.party_bits(2), vec![Some(1)]);
        let expected = pauli_delta(PauliOp::IY, 1, 3)
            .unwrap()
            .compose(&pauli_delta(PauliOp::IY, 2, 3).unwrap());
        let measured = match result.transcript.events().iter().find_map(|e| match e {
            crate::protocol::TranscriptEvent::Announcement { measured, .. } => Some(*measured),
            _ => None,
        }) {
            Some(m) => m,
            None => panic!("no announcement"),
        };
        assert_eq!(measured, "000".parse::<crate::quantum::GhzIndex>().unwrap().apply(&expected));
    }

    #[test]
    fn invalid_probability_rejected() {
        assert!(DisturbanceConfig::new(DisturbanceMode::MeasureZ, 1.5).validate().is_err());
        assert!(DisturbanceConfig::new(DisturbanceMode::MeasureZ, 1.0).validate().is_ok());
    }
}
