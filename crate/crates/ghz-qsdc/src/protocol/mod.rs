//! Party state machines and session orchestration.
//!
//! A session runs in three steps. Alice prepares `groups` n-particle GHZ
//! groups with uniformly random indices and distributes particle `i` of
//! every group to party `i` (step one). Party 1 picks `check_count` random
//! group positions and a random Z/X basis per position; everyone measures
//! and announces, and Alice aborts if the joint outcomes violate the
//! prepared correlations more often than `abort_threshold` (step two).
//! On the remaining message groups every party encodes its secret bits
//! with Pauli operations, the non-Alice particles travel back, Alice
//! measures each group in the GHZ basis and announces (initial, measured)
//! labels, everyone decodes everyone else, and a final reveal check
//! compares a random fraction of disclosed message bits against Alice's
//! decoding to catch tampering on the return leg (step three).

mod config;
mod encoding;
mod session;
mod transcript;

pub use config::{MessagePlan, PartyId, SessionConfig};
pub use encoding::{
    decode_bit, decode_dibit, decode_others, encode_bit, encode_dibit, solve_group, DecodedGroup,
    DecodedView,
};
pub use session::{
    distribute, encode_phase, prepare_groups, readout_and_announce, reveal_check, run_check_phase,
    run_session, run_session_with_tap, Announcement, CheckRecord, CheckReport, Holdings,
    PreparedGroup, RevealReport, SessionResult, SessionStatus,
};
pub use transcript::{Transcript, TranscriptEvent};

use crate::quantum::QuantumError;

/// Errors from protocol-layer operations. Detected eavesdropping is not an
/// error: aborts are reported in [`SessionResult`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("invalid session config: {0}")]
    InvalidConfig(String),
    #[error("message plan does not fit the session: {0}")]
    InvalidPlan(String),
    #[error("channel refused particle of party {party} in group {group}")]
    ChannelRefused { party: u8, group: u32 },
    #[error("no operation assignment explains announcement for group {group}")]
    NoSolution { group: u32 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
