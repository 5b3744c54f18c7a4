//! Session parameters and message plans.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::quantum::GhzIndex;

/// A protocol participant. Party 0 is Alice, who prepares groups, measures
/// in the GHZ basis, and encodes two bits per group; parties 1..n-1 encode
/// one bit each. A party's index is also its qubit position in every group.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct PartyId(pub u8);

impl PartyId {
    pub const ALICE: PartyId = PartyId(0);

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn is_alice(self) -> bool {
        self.0 == 0
    }

    /// Human name for display: Alice, Bob, Charlie, then "party N".
    pub fn name(self) -> String {
        match self.0 {
            0 => "Alice".to_string(),
            1 => "Bob".to_string(),
            2 => "Charlie".to_string(),
            i => format!("party {i}"),
        }
    }
}

impl std::fmt::Display for PartyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

fn default_reveal_fraction() -> f64 {
    0.1
}

/// Parameters of one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    /// Party count n >= 3.
    pub parties: u8,
    /// Total GHZ groups prepared.
    pub groups: u32,
    /// Size of the eavesdropping-check subset. Must be smaller than
    /// `groups`; 0 disables the check phase entirely and exists only as a
    /// diagnostic mode for attack experiments.
    pub check_count: u32,
    /// Abort when the check error rate exceeds this. The simulated channels
    /// are noiseless, so the default is 0: any inconsistency aborts.
    #[serde(default)]
    pub abort_threshold: f64,
    /// Fraction of message positions each non-Alice party discloses in the
    /// reveal check.
    #[serde(default = "default_reveal_fraction")]
    pub reveal_fraction: f64,
    /// Master seed. Every random choice in the session derives from it.
    pub seed: u64,
    /// Force every group to this initial index instead of drawing
    /// uniformly. Diagnostic hook for reproducing single-state analyses.
    #[serde(default)]
    pub forced_initial: Option<GhzIndex>,
}

impl SessionConfig {
    /// A config with default threshold (0), reveal fraction (0.1), and no
    /// forced index.
    pub fn new(parties: u8, groups: u32, check_count: u32, seed: u64) -> Self {
        SessionConfig {
            parties,
            groups,
            check_count,
            abort_threshold: 0.0,
            reveal_fraction: default_reveal_fraction(),
            seed,
            forced_initial: None,
        }
    }

    /// Message groups left after the check phase.
    pub fn message_group_count(&self) -> u32 {
        self.groups - self.check_count
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let fail = |msg: String| Err(ProtocolError::InvalidConfig(msg));
        if self.parties < 3 {
            return fail(format!("need at least 3 parties, got {}", self.parties));
        }
        if self.parties > 16 {
            return fail(format!("party count {} too large to simulate", self.parties));
        }
        if self.groups == 0 {
            return fail("need at least one group".to_string());
        }
        if self.check_count >= self.groups {
            return fail(format!(
                "check subset ({}) must leave at least one message group of {}",
                self.check_count, self.groups
            ));
        }
        if !(0.0..=1.0).contains(&self.abort_threshold) {
            return fail(format!("abort threshold {} out of [0,1]", self.abort_threshold));
        }
        if !(0.0..=1.0).contains(&self.reveal_fraction) {
            return fail(format!("reveal fraction {} out of [0,1]", self.reveal_fraction));
        }
        if let Some(idx) = &self.forced_initial {
            if idx.qubit_count() != usize::from(self.parties) {
                return fail(format!(
                    "forced initial index is for {} qubits, session has {} parties",
                    idx.qubit_count(),
                    self.parties
                ));
            }
        }
        Ok(())
    }
}

/// The secret bits each party wants to transmit: two per message group for
/// Alice, one per message group for everyone else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessagePlan {
    /// Alice's dibits, one pair per message group.
    pub alice: Vec<[u8; 2]>,
    /// One bit string per non-Alice party (index j-1 for party j).
    pub others: Vec<Vec<u8>>,
}

impl MessagePlan {
    /// Draw a uniformly random plan for `parties` parties and
    /// `message_groups` message groups.
    pub fn random<R: Rng>(parties: u8, message_groups: u32, rng: &mut R) -> Self {
        let k = message_groups as usize;
        let alice = (0..k).map(|_| [rng.gen_range(0..2u8), rng.gen_range(0..2u8)]).collect();
        let others = (1..parties)
            .map(|_| (0..k).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        MessagePlan { alice, others }
    }

    /// Build from bit strings: Alice's `2K` bits and one `K`-bit string per
    /// other party.
    pub fn from_bits(alice_bits: &[u8], other_bits: &[Vec<u8>]) -> Result<Self, ProtocolError> {
        if alice_bits.len() % 2 != 0 {
            return Err(ProtocolError::InvalidPlan(format!(
                "Alice sends two bits per group; got {} bits",
                alice_bits.len()
            )));
        }
        let alice: Vec<[u8; 2]> = alice_bits.chunks(2).map(|c| [c[0] & 1, c[1] & 1]).collect();
        let k = alice.len();
        for (j, bits) in other_bits.iter().enumerate() {
            if bits.len() != k {
                return Err(ProtocolError::InvalidPlan(format!(
                    "party {} has {} bits, expected {}",
                    j + 1,
                    bits.len(),
                    k
                )));
            }
        }
        Ok(MessagePlan {
            alice,
            others: other_bits.to_vec(),
        })
    }

    pub fn message_group_count(&self) -> usize {
        self.alice.len()
    }

    pub fn validate(&self, config: &SessionConfig) -> Result<(), ProtocolError> {
        let k = config.message_group_count() as usize;
        if self.alice.len() != k {
            return Err(ProtocolError::InvalidPlan(format!(
                "Alice has {} dibits, session has {} message groups",
                self.alice.len(),
                k
            )));
        }
        if self.others.len() != usize::from(config.parties) - 1 {
            return Err(ProtocolError::InvalidPlan(format!(
                "plan covers {} non-Alice parties, session has {}",
                self.others.len(),
                config.parties - 1
            )));
        }
        for (j, bits) in self.others.iter().enumerate() {
            if bits.len() != k {
                return Err(ProtocolError::InvalidPlan(format!(
                    "party {} has {} bits, expected {}",
                    j + 1,
                    bits.len(),
                    k
                )));
            }
            if bits.iter().any(|&b| b > 1) {
                return Err(ProtocolError::InvalidPlan(format!("party {} has non-bit values", j + 1)));
            }
        }
        if self.alice.iter().flatten().any(|&b| b > 1) {
            return Err(ProtocolError::InvalidPlan("Alice has non-bit values".to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn config_validation_catches_bad_parameters() {
        assert!(SessionConfig::new(3, 10, 5, 1).validate().is_ok());
        assert!(SessionConfig::new(2, 10, 5, 1).validate().is_err());
        assert!(SessionConfig::new(3, 10, 10, 1).validate().is_err());
        assert!(SessionConfig::new(3, 0, 0, 1).validate().is_err());
        let mut c = SessionConfig::new(3, 10, 5, 1);
        c.abort_threshold = 1.5;
        assert!(c.validate().is_err());
        let mut c = SessionConfig::new(3, 10, 5, 1);
        c.reveal_fraction = -0.1;
        assert!(c.validate().is_err());
        let mut c = SessionConfig::new(4, 10, 5, 1);
        c.forced_initial = Some(GhzIndex::from_paper_label("000").unwrap());
        assert!(c.validate().is_err());
        c.parties = 3;
        assert!(c.validate().is_ok());
        // check_count 0 is the diagnostic no-check mode
        assert!(SessionConfig::new(3, 1, 0, 1).validate().is_ok());
    }

    #[test]
    fn plan_shapes_are_enforced() {
        let config = SessionConfig::new(3, 5, 2, 7);
        let mut rng = stream(7, "plan", 0);
        let plan = MessagePlan::random(3, 3, &mut rng);
        assert!(plan.validate(&config).is_ok());
        assert_eq!(plan.alice.len(), 3);
        assert_eq!(plan.others.len(), 2);

        let short = MessagePlan::from_bits(&[0, 1], &[vec![0], vec![1]]).unwrap();
        assert!(short.validate(&config).is_err());
        assert!(MessagePlan::from_bits(&[0, 1, 0], &[]).is_err());
        assert!(MessagePlan::from_bits(&[0, 1], &[vec![0, 1]]).is_err());
    }

    #[test]
    fn party_names() {
        assert_eq!(PartyId(0).name(), "Alice");
        assert_eq!(PartyId(1).name(), "Bob");
        assert_eq!(PartyId(2).name(), "Charlie");
        assert_eq!(PartyId(5).name(), "party 5");
        assert!(PartyId::ALICE.is_alice());
    }
}
