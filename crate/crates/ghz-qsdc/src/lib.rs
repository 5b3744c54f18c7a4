//! Simulator for simultaneous quantum secure direct communication (QSDC)
//! over Greenberger-Horne-Zeilinger states.
//!
//! Alice prepares groups of n-particle GHZ states and distributes one
//! particle of each group to every other party. After a correlation check
//! on a sacrificed subset, all parties encode message bits on their
//! particles with Pauli operations (Alice two bits per group, everyone else
//! one), Alice measures each group in the GHZ basis, and the public
//! announcement of (initial, measured) labels lets every party read out
//! every other party's message at once.
//!
//! The crate is organized in four layers:
//!
//! - [`quantum`] — a dense state-vector simulator over labeled qubits:
//!   GHZ construction, Pauli application, Z/X and GHZ-basis measurement,
//!   and the GF(2) index algebra that makes decoding a linear solve.
//! - [`protocol`] — the party state machines: preparation, distribution,
//!   eavesdropping check, encoding, readout, decoding, and the reveal
//!   check that defeats tampering on the return channel.
//! - [`adversary`] — the quantum channel taps: a null channel, the
//!   intercept-and-resend attack, and the disturbance attack, with Eve's
//!   private storage and knowledge report.
//! - [`harness`] — seeded Monte Carlo experiments over sessions: error
//!   rates, detection probabilities, message fidelity, and Eve's recovered
//!   information, with reproducible file outputs.
//!
//! Every source of randomness derives from a single master seed, so a
//! session or experiment is reproducible bit for bit.
//!
//! ## Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p ghz-qsdc --example ghz_basis          # the GHZ family in both bases
//! cargo run -p ghz-qsdc --example worked_example     # one-group three-party exchange
//! cargo run -p ghz-qsdc --example three_party_session
//! cargo run -p ghz-qsdc --example n_party_session
//! cargo run -p ghz-qsdc --example intercept_resend   # attack, detection, and leakage
//! cargo run -p ghz-qsdc --example disturbance        # tampering and the reveal check
//! cargo run -p ghz-qsdc --example check_error_rates  # per-basis error rates under attack
//! cargo run -p ghz-qsdc --example detection_sweep    # detection probability vs. check size
//! ```
//!
//! A thin CLI (`qsdc run|stats|sweep|selftest`) wraps the harness for batch
//! use; see the README.

pub mod adversary;
pub mod harness;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use adversary::{
    eve_information, AdversarySpec, ChannelTap, Disturbance, DisturbanceConfig, DisturbanceMode,
    EveInformation, EveReport, FakePrep, InterceptResend, InterceptResendConfig, NullChannel,
};
pub use protocol::{
    run_session, DecodedGroup, DecodedView, MessagePlan, PartyId, ProtocolError, SessionConfig,
    SessionResult, SessionStatus, Transcript, TranscriptEvent,
};
pub use quantum::{
    ghz_state, inner_product, outcome_is_consistent, pauli_delta, GhzIndex, Holder, IndexDelta,
    MeasBasis, PauliOp, QuantumError, QuantumRegistry, QubitLabel, SingleQubitState, StateVector,
};
