//! The intercept-and-resend attack.
//!
//! On the forward leg Eve keeps each targeted genuine particle and sends
//! the party a fresh single qubit prepared in a state she knows. The party
//! unknowingly encodes its bit on the fake and returns it; Eve measures
//! the fake in its preparation basis — iY flips the outcome within either
//! basis, identity leaves it — so she reads the bit exactly, re-encodes
//! the same operation onto the stored genuine particle, and forwards that
//! to Alice. The message flow completes and everyone decodes correctly;
//! when all non-Alice parties were targeted, the public announcements then
//! hand Eve Alice's dibits too. Only the correlation check phase can catch
//! the substitution.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::{EveAction, EveBits, EveDibits, EveReport};
use super::{ChannelRefusal, ChannelTap};
use crate::protocol::{Announcement, PartyId};
use crate::quantum::{
    pauli_delta, Holder, PauliOp, QuantumRegistry, QubitLabel, SingleQubitState,
};
use crate::rng::StreamRng;

/// How Eve prepares the fake for one targeted party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FakePrep {
    Zero,
    One,
    Plus,
    Minus,
    /// Uniformly one of the four, drawn fresh per group.
    Random,
}

impl FakePrep {
    fn draw<R: Rng>(self, rng: &mut R) -> SingleQubitState {
        match self {
            FakePrep::Zero => SingleQubitState::Zero,
            FakePrep::One => SingleQubitState::One,
            FakePrep::Plus => SingleQubitState::Plus,
            FakePrep::Minus => SingleQubitState::Minus,
            FakePrep::Random => match rng.gen_range(0..4) {
                0 => SingleQubitState::Zero,
                1 => SingleQubitState::One,
                2 => SingleQubitState::Plus,
                _ => SingleQubitState::Minus,
            },
        }
    }
}

/// Which parties Eve intercepts and what she sends them instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptResendConfig {
    /// Targeted party indices (each >= 1).
    pub targets: Vec<u8>,
    /// Fake preparation per target, parallel to `targets`.
    pub fakes: Vec<FakePrep>,
}

impl InterceptResendConfig {
    /// Target the given parties with the given preparations.
    pub fn new(pairs: &[(u8, FakePrep)]) -> Self {
        InterceptResendConfig {
            targets: pairs.iter().map(|&(p, _)| p).collect(),
            fakes: pairs.iter().map(|&(_, f)| f).collect(),
        }
    }

    /// Target every non-Alice party of an n-party session with `prep`.
    pub fn all_parties(parties: u8, prep: FakePrep) -> Self {
        InterceptResendConfig {
            targets: (1..parties).collect(),
            fakes: vec![prep; usize::from(parties) - 1],
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.targets.is_empty() {
            return Err("intercept-resend needs at least one targeted party".to_string());
        }
        if self.targets.len() != self.fakes.len() {
            return Err(format!(
                "{} targets but {} fake preparations",
                self.targets.len(),
                self.fakes.len()
            ));
        }
        let unique: BTreeSet<u8> = self.targets.iter().copied().collect();
        if unique.len() != self.targets.len() {
            return Err("duplicate targeted party".to_string());
        }
        if unique.contains(&0) {
            return Err("party 0 keeps its particle and cannot be targeted".to_string());
        }
        Ok(())
    }

    fn prep_for(&self, party: u8) -> Option<FakePrep> {
        self.targets
            .iter()
            .position(|&t| t == party)
            .map(|i| self.fakes[i])
    }
}

#[derive(Debug, Clone)]
struct FakeEntry {
    genuine: QubitLabel,
    fake: QubitLabel,
    prep: SingleQubitState,
    inferred: Option<PauliOp>,
}

/// Live state of the attack across a session.
pub struct InterceptResend {
    cfg: InterceptResendConfig,
    rng: StreamRng,
    entries: BTreeMap<(u32, u8), FakeEntry>,
    parties_seen: BTreeSet<u8>,
    report: EveReport,
}

impl InterceptResend {
    pub fn new(cfg: InterceptResendConfig, rng: StreamRng) -> Self {
        InterceptResend {
            cfg,
            rng,
            entries: BTreeMap::new(),
            parties_seen: BTreeSet::new(),
            report: EveReport::default(),
        }
    }
}

impl ChannelTap for InterceptResend {
    fn forward(
        &mut self,
        party: PartyId,
        group: u32,
        label: QubitLabel,
        registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        self.parties_seen.insert(party.0);
        let Some(prep_cfg) = self.cfg.prep_for(party.0) else {
            return Ok(label);
        };
        let prep = prep_cfg.draw(&mut self.rng);
        let fake = registry.insert_single(prep, Holder::Party(party.0));
        registry
            .set_holder(label, Holder::Adversary)
            .map_err(|_| ChannelRefusal)?;
        self.entries.insert(
            (group, party.0),
            FakeEntry {
                genuine: label,
                fake,
                prep,
                inferred: None,
            },
        );
        self.report.actions.push(EveAction::InjectedFake {
            group,
            party: party.0,
            prep,
        });
        Ok(fake)
    }

    fn backward(
        &mut self,
        party: PartyId,
        group: u32,
        label: QubitLabel,
        registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        let Some(entry) = self.entries.get_mut(&(group, party.0)) else {
            return Ok(label);
        };
        if label != entry.fake {
            return Ok(label);
        }
        // Measure the encoded fake in its preparation basis: the outcome
        // flips exactly when the party applied iY.
        let outcome = registry
            .measure_single(entry.fake, entry.prep.basis(), &mut self.rng)
            .map_err(|_| ChannelRefusal)?;
        let bit = outcome ^ entry.prep.bit();
        let op = if bit == 1 { PauliOp::IY } else { PauliOp::I };
        registry
            .apply_pauli(entry.genuine, op)
            .map_err(|_| ChannelRefusal)?;
        entry.inferred = Some(op);
        self.report.party_bits.push(EveBits {
            group,
            party: party.0,
            bit,
        });
        self.report.actions.push(EveAction::MeasuredFake {
            group,
            party: party.0,
            outcome,
            inferred_bit: bit,
        });
        self.report.actions.push(EveAction::ReencodedGenuine {
            group,
            party: party.0,
            op,
        });
        Ok(entry.genuine)
    }

    fn observe_announcements(&mut self, announcements: &[Announcement]) {
        // Alice's dibit is derivable only when Eve knows every other
        // party's operation on the group.
        let non_alice: Vec<u8> = self.parties_seen.iter().copied().collect();
        for ann in announcements {
            let n = ann.initial.qubit_count();
            let mut delta = ann.initial.delta_to(&ann.measured);
            let mut complete = !non_alice.is_empty();
            for &party in &non_alice {
                match self
                    .entries
                    .get(&(ann.group, party))
                    .and_then(|e| e.inferred)
                {
                    Some(op) => {
                        delta = delta
                            .compose(&pauli_delta(op, usize::from(party), n).expect("party < n"));
                    }
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if !complete {
                continue;
            }
            // What remains must be Alice's own toggle on qubit 0.
            if (1..n - 1).any(|q| delta.pattern_bit(q) == 1) {
                continue;
            }
            let op = match (delta.pattern_bit(0), delta.phase_bit()) {
                (0, 0) => PauliOp::I,
                (1, 0) => PauliOp::X,
                (1, 1) => PauliOp::IY,
                _ => PauliOp::Z,
            };
            let dibit = crate::protocol::decode_dibit(op);
            self.report.alice_dibits.push(EveDibits {
                group: ann.group,
                dibit,
            });
        }
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
    use crate::rng::stream;

    #[test]
    fn config_validation() {
        assert!(InterceptResendConfig::all_parties(3, FakePrep::Zero).validate().is_ok());
        assert!(InterceptResendConfig { targets: vec![], fakes: vec![] }.validate().is_err());
        assert!(InterceptResendConfig { targets: vec![1], fakes: vec![] }.validate().is_err());
        assert!(InterceptResendConfig { targets: vec![1, 1], fakes: vec![FakePrep::Zero; 2] }
            .validate()
            .is_err());
        assert!(InterceptResendConfig { targets: vec![0], fakes: vec![FakePrep::Zero] }
            .validate()
            .is_err());
    }

    #[test]
    fn with_checks_disabled_eve_reads_every_message() {
        let mut config = SessionConfig::new(3, 8, 0, 21);
        config.reveal_fraction = 0.0;
        let mut rng = stream(21, "plan", 0);
        let plan = MessagePlan::random(3, 8, &mut rng);
        let spec = AdversarySpec::InterceptResend(InterceptResendConfig::new(&[
            (1, FakePrep::Zero),
            (2, FakePrep::One),
        ]));
        let result = run_session(&config, &plan, &spec).unwrap();
        assert_eq!(result.status, SessionStatus::Completed);
        // The honest parties still decode each other correctly: Eve
        // re-encoded the same operations onto the genuine particles.
        assert!(result.decoded_exactly(&plan));
        // And Eve recovered everything.
        let report = result.eve_report.expect("attack produces a report");
        let info = super::super::eve_information(&report, &plan, &result.message_groups);
        assert_eq!(info.per_party[&1].fraction(), 1.0);
        assert_eq!(info.per_party[&2].fraction(), 1.0);
        assert_eq!(info.per_party[&0].fraction(), 1.0);
        assert_eq!(info.per_party[&1].total, 8);
        assert_eq!(info.per_party[&0].total, 16);
    }

    #[test]
    fn genuine_particles_end_up_with_eve_on_the_forward_leg() {
        let config = SessionConfig::new(3, 1, 0, 3);
        let spec = InterceptResendConfig::all_parties(3, FakePrep::Plus);
        let mut tap = InterceptResend::new(spec, stream(3, "adversary", 0));
        let mut groups = crate::protocol::prepare_groups(&config).unwrap();
        let holdings = crate::protocol::distribute(&mut groups, &mut tap).unwrap();
        let group = &groups[0];
        // Original b and c are now adversary-held; the parties hold fakes.
        assert_eq!(group.registry.holder(group.particles[1]).unwrap(), Holder::Adversary);
        assert_eq!(group.registry.holder(group.particles[2]).unwrap(), Holder::Adversary);
        for party in 1..3u8 {
            let held = holdings.of(PartyId(party), 0);
            assert_ne!(held, group.particles[usize::from(party)]);
            assert_eq!(group.registry.holder(held).unwrap(), Holder::Party(party));
        }
    }

    #[test]
    fn random_prep_draws_vary_per_group() {
        let config = SessionConfig::new(3, 40, 0, 17);
        let spec = InterceptResendConfig::all_parties(3, FakePrep::Random);
        let mut tap = InterceptResend::new(spec, stream(17, "adversary", 0));
        let mut groups = crate::protocol::prepare_groups(&config).unwrap();
        let _ = crate::protocol::distribute(&mut groups, &mut tap).unwrap();
        let preps: BTreeSet<String> = tap
            .report
            .actions
            .iter()
            .filter_map(|a| match a {
                EveAction::InjectedFake { prep, .. } => Some(format!("{prep:?}")),
                _ => None,
            })
            .collect();
        assert_eq!(preps.len(), 4, "all four preparations appear: {preps:?}");
    }
}
