//! Eve's accumulated knowledge and its scoring against the truth.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::protocol::MessagePlan;
use crate::quantum::{PauliOp, SingleQubitState};

/// One message bit Eve attributes to a party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveBits {
    pub group: u32,
    pub party: u8,
    pub bit: u8,
}

/// One Alice dibit Eve derived from the public announcements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveDibits {
    pub group: u32,
    pub dibit: [u8; 2],
}

/// One logged channel action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum EveAction {
    InjectedFake {
        group: u32,
        party: u8,
        prep: SingleQubitState,
    },
    MeasuredFake {
        group: u32,
        party: u8,
        outcome: u8,
        inferred_bit: u8,
    },
    ReencodedGenuine {
        group: u32,
        party: u8,
        op: PauliOp,
    },
    AppliedOp {
        group: u32,
        party: u8,
        op: PauliOp,
    },
    MeasuredZ {
        group: u32,
        party: u8,
        outcome: u8,
    },
    GuessedBit {
        group: u32,
        party: u8,
        bit: u8,
    },
}

/// Everything the adversary knows after a session: recovered (or guessed)
/// message bits, derived Alice dibits, and the raw action log. Populated
/// only for particles the adversary actually touched.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EveReport {
    pub party_bits: Vec<EveBits>,
    pub alice_dibits: Vec<EveDibits>,
    pub actions: Vec<EveAction>,
}

impl EveReport {
    pub fn is_empty(&self) -> bool {
        self.party_bits.is_empty() && self.alice_dibits.is_empty() && self.actions.is_empty()
    }
}

/// Correct/total recovery counts for one party's message bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartyRecovery {
    pub correct: u64,
    pub total: u64,
}

impl PartyRecovery {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            f64::NAN
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

/// Eve's recovery rate per party. Parties she never touched are absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EveInformation {
    /// Keyed by party index; 0 is Alice (dibits count two bits each).
    pub per_party: BTreeMap<u8, PartyRecovery>,
}

impl EveInformation {
    /// Pooled (correct, total) over all parties.
    pub fn pooled(&self) -> PartyRecovery {
        let mut acc = PartyRecovery::default();
        for r in self.per_party.values() {
            acc.correct += r.correct;
            acc.total += r.total;
        }
        acc
    }
}

/// Score a report against the true plan: the exact-match fraction of
/// message bits per party. A disturbance adversary records uniform
/// guesses, so her fraction sits at the 0.5 baseline; an undetected
/// intercept-and-resend recovers everything.
///
/// `message_groups` gives the group id of each message position, as
/// reported in [`crate::protocol::SessionResult::message_groups`].
pub fn eve_information(
    report: &EveReport,
    plan: &MessagePlan,
    message_groups: &[u32],
) -> EveInformation {
    let position: HashMap<u32, usize> = message_groups
        .iter()
        .enumerate()
        .map(|(k, &g)| (g, k))
        .collect();
    let mut info = EveInformation::default();
    for rec in &report.party_bits {
        let Some(&k) = position.get(&rec.group) else {
            continue;
        };
        let truth = plan.others[usize::from(rec.party) - 1][k];
        let entry = info.per_party.entry(rec.party).or_default();
        entry.total += 1;
        if truth == rec.bit {
            entry.correct += 1;
        }
    }
    for rec in &report.alice_dibits {
        let Some(&k) = position.get(&rec.group) else {
            continue;
        };
        let truth = plan.alice[k];
        let entry = info.per_party.entry(0).or_default();
        entry.total += 2;
        entry.correct += u64::from(truth[0] == rec.dibit[0]) + u64::from(truth[1] == rec.dibit[1]);
    }
    info
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring_counts_per_party_and_skips_unknown_groups() {
        let plan = MessagePlan::from_bits(&[0, 1, 1, 0], &[vec![1, 0], vec![0, 1]]).unwrap();
        let report = EveReport {
            party_bits: vec![
                EveBits { group: 2, party: 1, bit: 1 },  // correct (k=0)
                EveBits { group: 5, party: 1, bit: 1 },  // wrong (k=1, truth 0)
                EveBits { group: 5, party: 2, bit: 1 },  // correct
                EveBits { group: 9, party: 2, bit: 0 },  // not a message group
            ],
            alice_dibits: vec![EveDibits { group: 2, dibit: [0, 0] }], // one of two bits
            actions: vec![],
        };
        let info = eve_information(&report, &plan, &[2, 5]);
        assert_eq!(info.per_party[&1], PartyRecovery { correct: 1, total: 2 });
        assert_eq!(info.per_party[&2], PartyRecovery { correct: 1, total: 1 });
        assert_eq!(info.per_party[&0], PartyRecovery { correct: 1, total: 2 });
        assert_eq!(info.pooled(), PartyRecovery { correct: 3, total: 5 });
    }

    #[test]
    fn empty_report_has_no_fractions() {
        let plan = MessagePlan::from_bits(&[0, 1], &[vec![1], vec![0]]).unwrap();
        let info = eve_information(&EveReport::default(), &plan, &[0]);
        assert!(info.per_party.is_empty());
        assert!(info.pooled().fraction().is_nan());
    }
}
