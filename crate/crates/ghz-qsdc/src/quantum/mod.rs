//! Dense state-vector simulation of labeled qubits.
//!
//! States live in [`StateVector`]s over ordered [`QubitLabel`]s; a
//! [`QuantumRegistry`] partitions the live labels of one group into
//! disjoint subsystems so that an adversary's injected particles can
//! coexist with the genuine entangled register without blowing up the
//! joint dimension. GHZ basis states are addressed by [`GhzIndex`], and
//! single-particle Pauli operations act on that index space as GF(2)
//! toggles ([`pauli_delta`]), which is what makes message decoding a
//! linear solve instead of a state reconstruction.

mod ghz;
mod pauli;
mod registry;
mod state;

pub use ghz::{ghz_state, outcome_is_consistent, pauli_delta, GhzIndex, IndexDelta};
pub use pauli::{MeasBasis, PauliOp};
pub use registry::{Holder, QuantumRegistry};
pub use state::{inner_product, QubitLabel, SingleQubitState, StateVector};

/// Complex amplitude type used throughout.
pub type Amplitude = num_complex::Complex64;

/// Tolerance for norm and probability invariants.
pub const NORM_TOL: f64 = 1e-10;

/// Errors from quantum-layer operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantumError {
    #[error("unknown qubit label {0}")]
    UnknownLabel(QubitLabel),
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(QubitLabel),
    #[error("pattern length {pattern_len} does not fit {qubits} qubits")]
    PatternLength { pattern_len: usize, qubits: usize },
    #[error("state vectors have different labels or label order")]
    LabelMismatch,
    #[error("outcome has length {got}, expected {expected}")]
    OutcomeLength { got: usize, expected: usize },
    #[error("qubit position {position} out of range for {qubits} qubits")]
    PositionOutOfRange { position: usize, qubits: usize },
    #[error("invalid GHZ label {0:?}")]
    BadLabel(String),
}
