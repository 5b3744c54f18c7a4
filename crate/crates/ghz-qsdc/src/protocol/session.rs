//! Session execution: prepare, distribute, check, encode, read out,
//! decode, reveal.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::encoding::{decode_others, encode_bit, encode_dibit, DecodedView};
use super::transcript::{Transcript, TranscriptEvent};
use super::{MessagePlan, PartyId, ProtocolError, SessionConfig};
use crate::adversary::{AdversarySpec, ChannelTap, EveReport};
use crate::quantum::{
    ghz_state, outcome_is_consistent, GhzIndex, Holder, MeasBasis, PauliOp, QuantumRegistry,
    QubitLabel,
};
use crate::rng::stream;

/// One GHZ group: its registry, Alice's private record of the prepared
/// index, and the original particle labels in party order.
#[derive(Debug, Clone)]
pub struct PreparedGroup {
    pub id: u32,
    pub initial: GhzIndex,
    pub particles: Vec<QubitLabel>,
    pub registry: QuantumRegistry,
}

/// Which label each party currently holds, per group position.
#[derive(Debug, Clone)]
pub struct Holdings {
    held: Vec<Vec<QubitLabel>>,
}

impl Holdings {
    pub fn of(&self, party: PartyId, group: u32) -> QubitLabel {
        self.held[party.index()][group as usize]
    }
}

/// Alice's public announcement for one message group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Announcement {
    pub group: u32,
    pub initial: GhzIndex,
    pub measured: GhzIndex,
}

/// Outcome record of one check group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub group: u32,
    pub basis: MeasBasis,
    pub outcome: Vec<u8>,
    pub consistent: bool,
}

/// What the eavesdropping check produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
    pub errors: u32,
    pub error_rate: f64,
    pub aborted: bool,
}

/// What the reveal check produced. Disclosed positions are public and
/// should be excluded from any payload accounting by the caller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevealReport {
    /// (party, message position, disclosed bit) triples.
    pub disclosures: Vec<(u8, u32, u8)>,
    pub mismatches: u32,
    pub aborted: bool,
}

/// How a session ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionStatus {
    Completed,
    AbortedCheck,
    AbortedReveal,
}

/// Everything a finished (or aborted) session produced.
#[derive(Debug, Clone, Serialize)]
pub struct SessionResult {
    pub status: SessionStatus,
    /// Fraction of check groups with inconsistent outcomes (0 when the
    /// check phase was disabled).
    pub check_error_rate: f64,
    pub check_report: Option<CheckReport>,
    /// Positions of the message groups, ascending.
    pub message_groups: Vec<u32>,
    /// Every party's decoding of every other party (empty when the session
    /// aborted before announcements).
    pub decoded: Vec<DecodedView>,
    pub reveal: Option<RevealReport>,
    /// The adversary's accumulated knowledge, when a real adversary tapped
    /// the channel.
    pub eve_report: Option<EveReport>,
    pub transcript: Transcript,
}

impl SessionResult {
    /// (correctly recovered bits, total expected bits) across every
    /// viewer/subject pair, counting unsolvable groups as not recovered.
    pub fn fidelity_counts(&self, plan: &MessagePlan) -> (u64, u64) {
        let mut correct = 0u64;
        let mut total = 0u64;
        let k = plan.message_group_count();
        for view in &self.decoded {
            let parties = plan.others.len() + 1;
            for subject in 0..parties {
                if subject == view.viewer.index() {
                    continue;
                }
                for g in 0..k {
                    let decoded = view.groups[g].as_ref();
                    if subject == 0 {
                        total += 2;
                        if let Some(d) = decoded {
                            let got = d.alice_dibit();
                            let want = plan.alice[g];
                            correct += u64::from(got[0] == want[0]) + u64::from(got[1] == want[1]);
                        }
                    } else {
                        total += 1;
                        if let Some(d) = decoded {
                            if d.party_bit(subject) == plan.others[subject - 1][g] {
                                correct += 1;
                            }
                        }
                    }
                }
            }
        }
        (correct, total)
    }

    /// True when every viewpoint recovered the full plan exactly.
    pub fn decoded_exactly(&self, plan: &MessagePlan) -> bool {
        let (correct, total) = self.fidelity_counts(plan);
        total > 0 && correct == total
    }
}

/// Step one, preparation: G groups, each in a uniformly random GHZ state
/// (or the forced index when configured), qubit `i` destined for party `i`.
pub fn prepare_groups(config: &SessionConfig) -> Result<Vec<PreparedGroup>, ProtocolError> {
    let n = usize::from(config.parties);
    let mut groups = Vec::with_capacity(config.groups as usize);
    for g in 0..config.groups {
        let mut rng = stream(config.seed, "prepare", u64::from(g));
        let initial = match &config.forced_initial {
            Some(idx) => *idx,
            None => GhzIndex::random(n, &mut rng),
        };
        let mut registry = QuantumRegistry::new();
        let particles = registry.alloc_labels(n);
        let state = ghz_state(initial, &particles)?;
        registry.insert_state(state, Holder::Party(PartyId::ALICE.0))?;
        groups.push(PreparedGroup {
            id: g,
            initial,
            particles,
            registry,
        });
    }
    Ok(groups)
}

/// Step one, distribution: particle `i` of every group travels to party
/// `i` through the channel's forward tap, which may substitute it.
pub fn distribute(
    groups: &mut [PreparedGroup],
    tap: &mut dyn ChannelTap,
) -> Result<Holdings, ProtocolError> {
    let n = groups
        .first()
        .map(|g| g.particles.len())
        .unwrap_or_default();
    let mut held = vec![Vec::with_capacity(groups.len()); n];
    for group in groups.iter_mut() {
        held[0].push(group.particles[0]);
        for i in 1..n {
            let party = PartyId(i as u8);
            let sent = group.particles[i];
            let received = tap
                .forward(party, group.id, sent, &mut group.registry)
                .map_err(|_| ProtocolError::ChannelRefused {
                    party: party.0,
                    group: group.id,
                })?;
            group.registry.set_holder(received, Holder::Party(party.0))?;
            held[i].push(received);
        }
    }
    Ok(Holdings { held })
}

/// Step two: party 1 picks `check_count` random positions and a random
/// basis per position; every party measures its particle of each check
/// group in that basis; Alice scores the joint outcomes against her
/// records.
pub fn run_check_phase(
    config: &SessionConfig,
    groups: &mut [PreparedGroup],
    holdings: &Holdings,
    transcript: &mut Transcript,
) -> Result<CheckReport, ProtocolError> {
    let mut selector = stream(config.seed, "check-select", 1);
    let m = config.check_count as usize;
    let mut positions: Vec<u32> =
        rand::seq::index::sample(&mut selector, config.groups as usize, m)
            .into_iter()
            .map(|p| p as u32)
            .collect();
    positions.sort_unstable();
    let bases: Vec<MeasBasis> = (0..m)
        .map(|_| {
            if selector.gen_bool(0.5) {
                MeasBasis::X
            } else {
                MeasBasis::Z
            }
        })
        .collect();
    transcript.push(TranscriptEvent::CheckSelection {
        positions: positions.clone(),
        bases: bases.clone(),
    });

    let n = usize::from(config.parties);
    let mut records = Vec::with_capacity(m);
    let mut errors = 0u32;
    for (&pos, &basis) in positions.iter().zip(&bases) {
        let group = &mut groups[pos as usize];
        let mut rng = stream(config.seed, "measure", u64::from(pos));
        let mut outcome = Vec::with_capacity(n);
        for i in 0..n {
            let q = holdings.of(PartyId(i as u8), pos);
            outcome.push(group.registry.measure_single(q, basis, &mut rng)?);
        }
        let consistent = outcome_is_consistent(&group.initial, basis, &outcome)?;
        if !consistent {
            errors += 1;
        }
        transcript.push(TranscriptEvent::CheckOutcome {
            group: pos,
            basis,
            outcome: basis.outcome_string(&outcome),
            consistent,
        });
        records.push(CheckRecord {
            group: pos,
            basis,
            outcome,
            consistent,
        });
    }
    let error_rate = if m == 0 { 0.0 } else { f64::from(errors) / m as f64 };
    let aborted = error_rate > config.abort_threshold;
    transcript.push(TranscriptEvent::CheckResult {
        errors,
        checked: config.check_count,
        error_rate,
        aborted,
    });
    Ok(CheckReport {
        records,
        errors,
        error_rate,
        aborted,
    })
}

/// The operations each party applied to the message groups, and the labels
/// Alice ended up holding for the readout.
pub struct EncodedGroups {
    /// `own_ops[i][k]` = party i's operation on the k-th message group.
    pub own_ops: Vec<Vec<PauliOp>>,
    /// `readout[k]` = the n labels (party order) Alice measures for the
    /// k-th message group.
    pub readout: Vec<Vec<QubitLabel>>,
}

/// Step three, encoding: the non-Alice parties encode one bit each and
/// return their particles through the channel's backward tap; Alice
/// encodes her dibit on the retained particle.
pub fn encode_phase(
    config: &SessionConfig,
    plan: &MessagePlan,
    groups: &mut [PreparedGroup],
    holdings: &Holdings,
    message_positions: &[u32],
    tap: &mut dyn ChannelTap,
) -> Result<EncodedGroups, ProtocolError> {
    let n = usize::from(config.parties);
    let mut own_ops = vec![Vec::with_capacity(message_positions.len()); n];
    let mut readout = Vec::with_capacity(message_positions.len());
    for (k, &pos) in message_positions.iter().enumerate() {
        let group = &mut groups[pos as usize];
        let mut labels = vec![group.particles[0]];
        for i in 1..n {
            let party = PartyId(i as u8);
            let op = encode_bit(plan.others[i - 1][k]);
            let q = holdings.of(party, pos);
            group.registry.apply_pauli(q, op)?;
            own_ops[i].push(op);
            let received = tap
                .backward(party, pos, q, &mut group.registry)
                .map_err(|_| ProtocolError::ChannelRefused {
                    party: party.0,
                    group: pos,
                })?;
            group
                .registry
                .set_holder(received, Holder::Party(PartyId::ALICE.0))?;
            labels.push(received);
        }
        let alice_op = encode_dibit(plan.alice[k]);
        group.registry.apply_pauli(group.particles[0], alice_op)?;
        own_ops[0].push(alice_op);
        readout.push(labels);
    }
    Ok(EncodedGroups { own_ops, readout })
}

/// Step three, readout: Alice measures each message group in the GHZ basis
/// and announces (initial, measured) labels.
pub fn readout_and_announce(
    config: &SessionConfig,
    groups: &mut [PreparedGroup],
    message_positions: &[u32],
    encoded: &EncodedGroups,
    transcript: &mut Transcript,
) -> Result<Vec<Announcement>, ProtocolError> {
    let mut announcements = Vec::with_capacity(message_positions.len());
    for (k, &pos) in message_positions.iter().enumerate() {
        let group = &mut groups[pos as usize];
        let mut rng = stream(config.seed, "readout", u64::from(pos));
        let measured = group.registry.ghz_measure(&encoded.readout[k], &mut rng)?;
        let ann = Announcement {
            group: pos,
            initial: group.initial,
            measured,
        };
        transcript.push(TranscriptEvent::Announcement {
            group: pos,
            initial: ann.initial,
            measured: ann.measured,
        });
        announcements.push(ann);
    }
    Ok(announcements)
}

/// Step three, reveal check: each non-Alice party discloses a random
/// `ceil(reveal_fraction * K)` of its (position, bit) pairs; Alice
/// compares them with her decoding and any mismatch aborts. A group Alice
/// could not decode counts as a mismatch when revealed.
pub fn reveal_check(
    config: &SessionConfig,
    plan: &MessagePlan,
    alice_view: &DecodedView,
    transcript: &mut Transcript,
) -> RevealReport {
    let k = plan.message_group_count();
    let reveal_count = ((config.reveal_fraction * k as f64).ceil() as usize).min(k);
    let mut disclosures = Vec::new();
    let mut mismatches = 0u32;
    for i in 1..=plan.others.len() {
        let mut rng = stream(config.seed, "reveal", i as u64);
        let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, k, reveal_count).into_vec();
        chosen.sort_unstable();
        for pos in chosen {
            let bit = plan.others[i - 1][pos];
            let matches = alice_view.groups[pos]
                .as_ref()
                .map(|d| d.party_bit(i) == bit)
                .unwrap_or(false);
            if !matches {
                mismatches += 1;
            }
            transcript.push(TranscriptEvent::Reveal {
                party: i as u8,
                position: pos as u32,
                bit,
            });
            disclosures.push((i as u8, pos as u32, bit));
        }
    }
    let aborted = mismatches > 0;
    transcript.push(TranscriptEvent::RevealResult {
        mismatches,
        revealed: disclosures.len() as u32,
        aborted,
    });
    RevealReport {
        disclosures,
        mismatches,
        aborted,
    }
}

/// Run a full session against the adversary described by `spec`.
pub fn run_session(
    config: &SessionConfig,
    plan: &MessagePlan,
    adversary: &AdversarySpec,
) -> Result<SessionResult, ProtocolError> {
    adversary
        .validate()
        .map_err(ProtocolError::InvalidConfig)?;
    let mut tap = adversary.build(stream(config.seed, "adversary", 0));
    run_session_with_tap(config, plan, tap.as_mut())
}

/// Run a full session through an explicit channel tap. A null tap gives
/// byte-identical results to [`run_session`] with no adversary.
pub fn run_session_with_tap(
    config: &SessionConfig,
    plan: &MessagePlan,
    tap: &mut dyn ChannelTap,
) -> Result<SessionResult, ProtocolError> {
    config.validate()?;
    plan.validate(config)?;

    let mut transcript = Transcript::new();
    transcript.push(TranscriptEvent::SessionStart {
        parties: config.parties,
        groups: config.groups,
        check_count: config.check_count,
        abort_threshold: config.abort_threshold,
        reveal_fraction: config.reveal_fraction,
    });

    let mut groups = prepare_groups(config)?;
    for g in &groups {
        transcript.push(TranscriptEvent::GroupPrepared {
            group: g.id,
            initial: g.initial,
        });
    }

    let holdings = distribute(&mut groups, tap)?;
    transcript.push(TranscriptEvent::DistributionComplete);

    let (check_report, check_error_rate) = if config.check_count > 0 {
        let report = run_check_phase(config, &mut groups, &holdings, &mut transcript)?;
        let rate = report.error_rate;
        let aborted = report.aborted;
        if aborted {
            let message_groups = message_positions(config, &report);
            return Ok(SessionResult {
                status: SessionStatus::AbortedCheck,
                check_error_rate: rate,
                check_report: Some(report),
                message_groups,
                decoded: Vec::new(),
                reveal: None,
                eve_report: tap.report(),
                transcript,
            });
        }
        (Some(report), rate)
    } else {
        (None, 0.0)
    };

    let positions = match &check_report {
        Some(report) => message_positions(config, report),
        None => (0..config.groups).collect(),
    };

    let encoded = encode_phase(config, plan, &mut groups, &holdings, &positions, tap)?;
    let announcements =
        readout_and_announce(config, &mut groups, &positions, &encoded, &mut transcript)?;
    tap.observe_announcements(&announcements);

    let decoded: Vec<DecodedView> = (0..config.parties)
        .map(|i| {
            decode_others(
                config.parties,
                PartyId(i),
                &encoded.own_ops[usize::from(i)],
                &announcements,
            )
        })
        .collect::<Result<_, _>>()?;

    let reveal = reveal_check(config, plan, &decoded[0], &mut transcript);
    let status = if reveal.aborted {
        SessionStatus::AbortedReveal
    } else {
        transcript.push(TranscriptEvent::Completed);
        SessionStatus::Completed
    };

    Ok(SessionResult {
        status,
        check_error_rate,
        check_report,
        message_groups: positions,
        decoded,
        reveal: Some(reveal),
        eve_report: tap.report(),
        transcript,
    })
}

/// Ascending positions of the groups not sacrificed to the check.
fn message_positions(config: &SessionConfig, report: &CheckReport) -> Vec<u32> {
    let checked: std::collections::BTreeSet<u32> =
        report.records.iter().map(|r| r.group).collect();
    (0..config.groups).filter(|g| !checked.contains(g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AdversarySpec;

    fn worked_example_config() -> (SessionConfig, MessagePlan) {
        let mut config = SessionConfig::new(3, 1, 0, 11);
        config.forced_initial = Some(GhzIndex::from_paper_label("000").unwrap());
        let plan = MessagePlan::from_bits(&[0, 1], &[vec![0], vec![1]]).unwrap();
        (config, plan)
    }

    #[test]
    fn worked_example_decodes_exactly() {
        let (config, plan) = worked_example_config();
        let result = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        assert_eq!(result.status, SessionStatus::Completed);
        let ann = match result.transcript.events().iter().find(|e| {
            matches!(e, TranscriptEvent::Announcement { .. })
        }) {
            Some(TranscriptEvent::Announcement { initial, measured, .. }) => (*initial, *measured),
            _ => panic!("no announcement"),
        };
        assert_eq!(ann.0.paper_label(), "000");
        assert_eq!(ann.1.paper_label(), "101");
        assert!(result.decoded_exactly(&plan));
        // Alice's view of Bob and Charlie specifically.
        let alice = &result.decoded[0];
        assert_eq!(alice.party_bits(1), vec![Some(0)]);
        assert_eq!(alice.party_bits(2), vec![Some(1)]);
        // Bob's view of Alice and Charlie.
        let bob = &result.decoded[1];
        assert_eq!(bob.alice_dibits(), vec![Some([0, 1])]);
        assert_eq!(bob.party_bits(2), vec![Some(1)]);
    }

    #[test]
    fn clean_session_completes_with_zero_error_rate() {
        let config = SessionConfig::new(3, 40, 20, 5);
        let mut rng = stream(5, "plan", 0);
        let plan = MessagePlan::random(3, config.message_group_count(), &mut rng);
        let result = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        assert_eq!(result.status, SessionStatus::Completed);
        assert_eq!(result.check_error_rate, 0.0);
        assert!(result.decoded_exactly(&plan));
        assert!(result.eve_report.is_none());
        assert_eq!(result.message_groups.len(), 20);
    }

    #[test]
    fn five_party_session_round_trips() {
        let config = SessionConfig::new(5, 60, 30, 9);
        let mut rng = stream(9, "plan", 0);
        let plan = MessagePlan::random(5, config.message_group_count(), &mut rng);
        let result = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        assert_eq!(result.status, SessionStatus::Completed);
        assert!(result.decoded_exactly(&plan));
    }

    #[test]
    fn transcript_partitions_groups() {
        let config = SessionConfig::new(3, 12, 5, 3);
        let mut rng = stream(3, "plan", 0);
        let plan = MessagePlan::random(3, config.message_group_count(), &mut rng);
        let result = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        let mut all: Vec<u32> = result.transcript.check_groups();
        all.extend(result.transcript.message_groups());
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn identical_seeds_identical_transcripts() {
        let config = SessionConfig::new(4, 16, 8, 42);
        let mut rng = stream(42, "plan", 0);
        let plan = MessagePlan::random(4, config.message_group_count(), &mut rng);
        let a = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        let b = run_session(&config, &plan, &AdversarySpec::None).unwrap();
        assert_eq!(a.transcript.to_jsonl(), b.transcript.to_jsonl());
        let c_config = SessionConfig { seed: 43, ..config };
        let c = run_session(&c_config, &plan, &AdversarySpec::None).unwrap();
        assert_ne!(a.transcript.to_jsonl(), c.transcript.to_jsonl());
    }

    #[test]
    fn plan_must_fit_config() {
        let config = SessionConfig::new(3, 4, 2, 1);
        let plan = MessagePlan::from_bits(&[0, 1], &[vec![0], vec![1]]).unwrap();
        assert!(matches!(
            run_session(&config, &plan, &AdversarySpec::None),
            Err(ProtocolError::InvalidPlan(_))
        ));
    }
}
