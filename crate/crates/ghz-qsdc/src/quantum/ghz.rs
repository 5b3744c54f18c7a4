//! The GHZ basis and its GF(2) index algebra.
//!
//! An n-qubit GHZ basis state is identified by a pattern `p` of n-1 bits
//! and a phase bit `s` and denotes the unit state
//!
//! ```text
//! |p, 0> + (-1)^s |p-bar, 1>
//! -------------------------      (p-bar = bitwise complement of p)
//!          sqrt(2)
//! ```
//!
//! where pattern bit `q` is the computational value of qubit `q` in the
//! first term and the last qubit is 0 there. The 2^n such states form an
//! orthonormal basis. Single-qubit Pauli operations permute this basis up
//! to a +-1 global phase, and the permutation is a constant XOR on
//! `(p, s)` independent of the starting index ([`pauli_delta`]); all of
//! the protocol's decoding rests on that.
//!
//! Display follows the conventional subscript labeling, which lists the
//! pattern bits in reversed qubit order followed by the phase bit
//! ([`GhzIndex::paper_label`]). For three qubits the canonical (p, s) =
//! (00, 0) is label "000", the state (|000> + |111>)/sqrt(2).

use serde::{Deserialize, Serialize};

use super::{Amplitude, MeasBasis, PauliOp, QuantumError, QubitLabel, StateVector};

/// Canonical label of one of the `2^n` n-qubit GHZ basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GhzIndex {
    qubits: u8,
    /// Pattern bits; bit `q` (LSB = qubit 0) is qubit q's value in the
    /// first term. Only the low `qubits - 1` bits are meaningful.
    pattern: u32,
    phase: bool,
}

impl GhzIndex {
    /// Build an index for `qubits` qubits (>= 2) from a pattern mask and
    /// phase bit.
    pub fn new(qubits: usize, pattern: u32, phase: bool) -> Result<Self, QuantumError> {
        if qubits < 2 || qubits > 31 {
            return Err(QuantumError::PatternLength {
                pattern_len: qubits.saturating_sub(1),
                qubits,
            });
        }
        if u64::from(pattern) >= (1u64 << (qubits - 1)) {
            return Err(QuantumError::PatternLength {
                pattern_len: (32 - pattern.leading_zeros()) as usize,
                qubits,
            });
        }
        Ok(GhzIndex {
            qubits: qubits as u8,
            pattern,
            phase,
        })
    }

    /// Build from pattern bits given in qubit order (`bits[q]` for qubit q).
    pub fn from_bits(bits: &[u8], phase: u8) -> Self {
        let mut pattern = 0u32;
        for (q, &b) in bits.iter().enumerate() {
            pattern |= u32::from(b & 1) << q;
        }
        GhzIndex {
            qubits: (bits.len() + 1) as u8,
            pattern,
            phase: phase & 1 == 1,
        }
    }

    pub fn qubit_count(&self) -> usize {
        usize::from(self.qubits)
    }

    pub fn phase(&self) -> bool {
        self.phase
    }

    /// Pattern bit of qubit `q`; the last qubit is 0 by convention.
    pub fn pattern_bit(&self, q: usize) -> u8 {
        assert!(q < self.qubit_count());
        if q == self.qubit_count() - 1 {
            0
        } else {
            ((self.pattern >> q) & 1) as u8
        }
    }

    /// Basis index (big-endian in qubit order) of the first term |p, 0>.
    pub fn first_term(&self) -> usize {
        let n = self.qubit_count();
        let mut idx = 0usize;
        for q in 0..n {
            idx |= usize::from(self.pattern_bit(q)) << (n - 1 - q);
        }
        idx
    }

    /// Basis index of the second term |p-bar, 1>.
    pub fn second_term(&self) -> usize {
        !self.first_term() & ((1 << self.qubit_count()) - 1)
    }

    /// Sign of the second term: +1 or -1.
    pub fn second_sign(&self) -> f64 {
        if self.phase {
            -1.0
        } else {
            1.0
        }
    }

    /// Dense rank in `0..2^n`: pattern bits plus the phase bit on top.
    pub fn rank(&self) -> u32 {
        self.pattern | (u32::from(self.phase) << (self.qubits - 1))
    }

    pub fn from_rank(qubits: usize, rank: u32) -> Result<Self, QuantumError> {
        let phase = rank >> (qubits - 1) & 1 == 1;
        GhzIndex::new(qubits, rank & !(!0u32 << (qubits - 1)), phase)
    }

    /// All `2^n` indices in rank order.
    pub fn all(qubits: usize) -> impl Iterator<Item = GhzIndex> {
        (0..1u32 << qubits).map(move |r| GhzIndex::from_rank(qubits, r).unwrap())
    }

    /// Draw an index uniformly at random.
    pub fn random<R: rand::Rng>(qubits: usize, rng: &mut R) -> Self {
        let r = rng.gen_range(0..1u32 << qubits);
        GhzIndex::from_rank(qubits, r).unwrap()
    }

    /// XOR a toggle onto this index.
    pub fn apply(&self, delta: &IndexDelta) -> GhzIndex {
        assert_eq!(self.qubits, delta.qubits, "toggle is for a different qubit count");
        GhzIndex {
            qubits: self.qubits,
            pattern: self.pattern ^ delta.dpattern,
            phase: self.phase ^ delta.dphase,
        }
    }

    /// The toggle taking this index to `other`.
    pub fn delta_to(&self, other: &GhzIndex) -> IndexDelta {
        assert_eq!(self.qubits, other.qubits);
        IndexDelta {
            qubits: self.qubits,
            dpattern: self.pattern ^ other.pattern,
            dphase: self.phase ^ other.phase,
        }
    }

    /// Conventional display label: pattern bits in reversed qubit order,
    /// then the phase bit. (00, 0) -> "000"; (p0=1 p1=0, 0) -> "010".
    pub fn paper_label(&self) -> String {
        let n = self.qubit_count();
        let mut s = String::with_capacity(n);
        for q in (0..n - 1).rev() {
            s.push(if self.pattern_bit(q) == 1 { '1' } else { '0' });
        }
        s.push(if self.phase { '1' } else { '0' });
        s
    }

    /// Parse a display label; the qubit count is the label length.
    pub fn from_paper_label(label: &str) -> Result<Self, QuantumError> {
        let bits: Vec<u8> = label
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(QuantumError::BadLabel(label.to_string())),
            })
            .collect::<Result<_, _>>()?;
        if bits.len() < 2 {
            return Err(QuantumError::BadLabel(label.to_string()));
        }
        let phase = bits[bits.len() - 1];
        let mut pattern_bits: Vec<u8> = bits[..bits.len() - 1].to_vec();
        pattern_bits.reverse();
        Ok(GhzIndex::from_bits(&pattern_bits, phase))
    }
}

impl std::fmt::Display for GhzIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.paper_label())
    }
}

impl From<GhzIndex> for String {
    fn from(idx: GhzIndex) -> String {
        idx.paper_label()
    }
}

impl TryFrom<String> for GhzIndex {
    type Error = QuantumError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        GhzIndex::from_paper_label(&s)
    }
}

impl std::str::FromStr for GhzIndex {
    type Err = QuantumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GhzIndex::from_paper_label(s)
    }
}

/// GF(2) toggle on a [`GhzIndex`]: `(p, s) <- (p ^ dp, s ^ ds)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexDelta {
    qubits: u8,
    dpattern: u32,
    dphase: bool,
}

impl IndexDelta {
    pub fn zero(qubits: usize) -> Self {
        IndexDelta {
            qubits: qubits as u8,
            dpattern: 0,
            dphase: false,
        }
    }

    pub fn new(qubits: usize, dpattern: u32, dphase: bool) -> Self {
        debug_assert!(u64::from(dpattern) < 1u64 << (qubits - 1));
        IndexDelta {
            qubits: qubits as u8,
            dpattern,
            dphase,
        }
    }

    pub fn qubit_count(&self) -> usize {
        usize::from(self.qubits)
    }

    pub fn pattern_bit(&self, q: usize) -> u8 {
        ((self.dpattern >> q) & 1) as u8
    }

    pub fn phase_bit(&self) -> u8 {
        u8::from(self.dphase)
    }

    pub fn is_zero(&self) -> bool {
        self.dpattern == 0 && !self.dphase
    }

    /// XOR-compose two toggles.
    pub fn compose(&self, other: &IndexDelta) -> IndexDelta {
        assert_eq!(self.qubits, other.qubits);
        IndexDelta {
            qubits: self.qubits,
            dpattern: self.dpattern ^ other.dpattern,
            dphase: self.dphase ^ other.dphase,
        }
    }
}

/// The toggle by which a Pauli on qubit `q` permutes the n-qubit GHZ basis.
///
/// - I is the zero toggle;
/// - Z on any qubit flips the phase bit;
/// - X on qubit q < n-1 flips pattern bit q, while X on the last qubit
///   flips the whole pattern;
/// - iY composes the X and Z toggles.
///
/// The resulting state equals `ghz_state(idx.apply(&delta))` up to a
/// global sign.
pub fn pauli_delta(op: PauliOp, q: usize, qubits: usize) -> Result<IndexDelta, QuantumError> {
    if q >= qubits {
        return Err(QuantumError::PositionOutOfRange {
            position: q,
            qubits,
        });
    }
    let full = !(!0u32 << (qubits - 1));
    let x_pattern = if q == qubits - 1 { full } else { 1u32 << q };
    Ok(match op {
        PauliOp::I => IndexDelta::zero(qubits),
        PauliOp::X => IndexDelta::new(qubits, x_pattern, false),
        PauliOp::Z => IndexDelta::new(qubits, 0, true),
        PauliOp::IY => IndexDelta::new(qubits, x_pattern, true),
    })
}

/// Construct the GHZ basis state `idx` over the given labels.
pub fn ghz_state(idx: GhzIndex, labels: &[QubitLabel]) -> Result<StateVector, QuantumError> {
    let n = idx.qubit_count();
    if labels.len() != n {
        return Err(QuantumError::PatternLength {
            pattern_len: n - 1,
            qubits: labels.len(),
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Amplitude::new(0.0, 0.0); 1 << n];
    amps[idx.first_term()] = Amplitude::new(h, 0.0);
    amps[idx.second_term()] = Amplitude::new(idx.second_sign() * h, 0.0);
    StateVector::new(labels.to_vec(), amps)
}

/// Does a joint product-basis outcome respect the correlations of GHZ
/// state `idx`?
///
/// In the Z basis the only consistent outcomes are the two terms of the
/// state; in the X basis an outcome is consistent exactly when its count
/// of `-` results has the parity of the phase bit. These are precisely the
/// outcomes of nonzero Born probability.
pub fn outcome_is_consistent(
    idx: &GhzIndex,
    basis: MeasBasis,
    outcome: &[u8],
) -> Result<bool, QuantumError> {
    let n = idx.qubit_count();
    if outcome.len() != n {
        return Err(QuantumError::OutcomeLength {
            got: outcome.len(),
            expected: n,
        });
    }
    Ok(match basis {
        MeasBasis::Z => {
            let first = (0..n).all(|q| outcome[q] & 1 == idx.pattern_bit(q));
            let second = (0..n).all(|q| outcome[q] & 1 == 1 - idx.pattern_bit(q));
            first || second
        }
        MeasBasis::X => {
            let minus_parity = outcome.iter().map(|&b| u32::from(b & 1)).sum::<u32>() % 2;
            (minus_parity == 1) == idx.phase()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::super::inner_product;
    use super::*;

    fn labels(n: usize) -> Vec<QubitLabel> {
        (0..n as u64).map(QubitLabel).collect()
    }

    fn idx(label: &str) -> GhzIndex {
        GhzIndex::from_paper_label(label).unwrap()
    }

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn ghz_000_has_equal_terms() {
        let s = ghz_state(idx("000"), &labels(3)).unwrap();
        assert!((s.amplitude_of(&[0, 0, 0]).re - H).abs() < 1e-12);
        assert!((s.amplitude_of(&[1, 1, 1]).re - H).abs() < 1e-12);
        let others: f64 = (0..8)
            .filter(|&x| x != 0 && x != 7)
            .map(|x| s.amplitudes()[x].norm())
            .sum();
        assert!(others < 1e-12);
    }

    #[test]
    fn ghz_101_is_010_minus_101() {
        // label 101 <-> (p0=0, p1=1, s=1): (|010> - |101>)/sqrt(2)
        let s = ghz_state(idx("101"), &labels(3)).unwrap();
        assert!((s.amplitude_of(&[0, 1, 0]).re - H).abs() < 1e-12);
        assert!((s.amplitude_of(&[1, 0, 1]).re + H).abs() < 1e-12);
    }

    #[test]
    fn epr_pair_degenerate_case() {
        let s = ghz_state(idx("00"), &labels(2)).unwrap();
        assert!((s.amplitude_of(&[0, 0]).re - H).abs() < 1e-12);
        assert!((s.amplitude_of(&[1, 1]).re - H).abs() < 1e-12);
    }

    #[test]
    fn ghz_rejects_wrong_label_count() {
        assert!(ghz_state(idx("000"), &labels(2)).is_err());
        assert!(ghz_state(idx("000"), &labels(4)).is_err());
    }

    #[test]
    fn paper_label_examples_and_round_trip() {
        // (p0=0, p1=1, s=0) -> "100"; first term |010>
        let i = GhzIndex::from_bits(&[0, 1], 0);
        assert_eq!(i.paper_label(), "100");
        assert_eq!(i.first_term(), 0b010);
        // (p0=1, p1=0, s=0) -> "010"; first term |100>
        let i = GhzIndex::from_bits(&[1, 0], 0);
        assert_eq!(i.paper_label(), "010");
        assert_eq!(i.first_term(), 0b100);
        // all-zero case
        assert_eq!(GhzIndex::from_bits(&[0, 0], 0).paper_label(), "000");
        for n in 2..=6 {
            for i in GhzIndex::all(n) {
                assert_eq!(GhzIndex::from_paper_label(&i.paper_label()).unwrap(), i);
                assert_eq!(GhzIndex::from_rank(n, i.rank()).unwrap(), i);
            }
        }
    }

    #[test]
    fn bad_labels_rejected() {
        assert!(GhzIndex::from_paper_label("01a").is_err());
        assert!(GhzIndex::from_paper_label("1").is_err());
    }

    #[test]
    fn pauli_delta_examples() {
        // X on qubit 0 of three: pattern bit 0, i.e. display delta "010".
        let d = pauli_delta(PauliOp::X, 0, 3).unwrap();
        assert_eq!(idx("000").apply(&d), idx("010"));
        // iY on the last qubit of three: display delta "111".
        let d = pauli_delta(PauliOp::IY, 2, 3).unwrap();
        assert_eq!(idx("000").apply(&d), idx("111"));
        // worked product: X on 0, I on 1, iY on 2 maps 000 to 101.
        let total = pauli_delta(PauliOp::X, 0, 3)
            .unwrap()
            .compose(&pauli_delta(PauliOp::I, 1, 3).unwrap())
            .compose(&pauli_delta(PauliOp::IY, 2, 3).unwrap());
        assert_eq!(idx("000").apply(&total), idx("101"));
        // identity is the zero toggle at any position.
        for q in 0..3 {
            assert!(pauli_delta(PauliOp::I, q, 3).unwrap().is_zero());
        }
        assert!(pauli_delta(PauliOp::X, 3, 3).is_err());
    }

    #[test]
    fn toggle_matches_state_vector_for_all_small_cases() {
        // Brute-force oracle: apply the Pauli to the dense state and find
        // the unique basis state with unit overlap.
        for n in 2..=5 {
            let ls = labels(n);
            for q in 0..n {
                for op in PauliOp::ALL {
                    let delta = pauli_delta(op, q, n).unwrap();
                    for start in GhzIndex::all(n) {
                        let mut s = ghz_state(start, &ls).unwrap();
                        s.apply_pauli(ls[q], op).unwrap();
                        let expect = ghz_state(start.apply(&delta), &ls).unwrap();
                        let overlap = inner_product(&expect, &s).unwrap();
                        assert!(
                            (overlap.norm() - 1.0).abs() < 1e-10,
                            "n={n} q={q} op={op} start={start}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_examples() {
        let i = idx("000");
        assert!(outcome_is_consistent(&i, MeasBasis::Z, &[1, 1, 1]).unwrap());
        assert!(!outcome_is_consistent(&i, MeasBasis::Z, &[0, 0, 1]).unwrap());
        // X outcomes: "+--" consistent, "+-+" not.
        assert!(outcome_is_consistent(&i, MeasBasis::X, &[0, 1, 1]).unwrap());
        assert!(!outcome_is_consistent(&i, MeasBasis::X, &[0, 1, 0]).unwrap());
        assert!(matches!(
            outcome_is_consistent(&i, MeasBasis::Z, &[0, 0]),
            Err(QuantumError::OutcomeLength { got: 2, expected: 3 })
        ));
    }

    #[test]
    fn serde_uses_paper_labels() {
        let i = idx("101");
        assert_eq!(serde_json::to_string(&i).unwrap(), "\"101\"");
        let back: GhzIndex = serde_json::from_str("\"101\"").unwrap();
        assert_eq!(back, i);
    }
}
