//! Append-only session log with a line-delimited serialization.

use serde::{Deserialize, Serialize};

use crate::quantum::{GhzIndex, MeasBasis};

/// One recorded event. Group preparation records are private to Alice
/// while the session runs (channel taps never see the transcript); they
/// appear here because the transcript is the post-hoc audit log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TranscriptEvent {
    SessionStart {
        parties: u8,
        groups: u32,
        check_count: u32,
        abort_threshold: f64,
        reveal_fraction: f64,
    },
    GroupPrepared {
        group: u32,
        initial: GhzIndex,
    },
    DistributionComplete,
    /// Party 1's random choice of check positions and bases.
    CheckSelection {
        positions: Vec<u32>,
        bases: Vec<MeasBasis>,
    },
    /// Joint outcome of one check group, in party order, rendered in the
    /// basis alphabet ("010" or "+-+").
    CheckOutcome {
        group: u32,
        basis: MeasBasis,
        outcome: String,
        consistent: bool,
    },
    CheckResult {
        errors: u32,
        checked: u32,
        error_rate: f64,
        aborted: bool,
    },
    /// Alice's public announcement for one message group.
    Announcement {
        group: u32,
        initial: GhzIndex,
        measured: GhzIndex,
    },
    /// One disclosed (position, bit) pair of the reveal check.
    Reveal {
        party: u8,
        position: u32,
        bit: u8,
    },
    RevealResult {
        mismatches: u32,
        revealed: u32,
        aborted: bool,
    },
    Completed,
}

/// Ordered list of everything that happened in a session.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript {
    events: Vec<TranscriptEvent>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: TranscriptEvent) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[TranscriptEvent] {
        &self.events
    }

    /// One JSON object per line, fields in declaration order; identical
    /// sessions serialize to identical bytes.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }

    /// Group ids announced as message groups.
    pub fn message_groups(&self) -> Vec<u32> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TranscriptEvent::Announcement { group, .. } => Some(*group),
                _ => None,
            })
            .collect()
    }

    /// Group ids sacrificed to the check phase.
    pub fn check_groups(&self) -> Vec<u32> {
        self.events
            .iter()
            .find_map(|e| match e {
                TranscriptEvent::CheckSelection { positions, .. } => Some(positions.clone()),
                _ => None,
            })
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_is_one_event_per_line_with_stable_fields() {
        let mut t = Transcript::new();
        t.push(TranscriptEvent::GroupPrepared {
            group: 3,
            initial: GhzIndex::from_paper_label("101").unwrap(),
        });
        t.push(TranscriptEvent::Completed);
        let text = t.to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            r#"{"event":"group_prepared","group":3,"initial":"101"}"#
        );
        assert_eq!(lines[1], r#"{"event":"completed"}"#);
        let back: TranscriptEvent = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(back, t.events()[0]);
    }
}
