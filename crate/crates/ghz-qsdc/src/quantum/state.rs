//! Labeled dense state vectors and the operations on them.

use serde::{Deserialize, Serialize};

use super::{Amplitude, MeasBasis, PauliOp, QuantumError, NORM_TOL};

/// Opaque identity of one qubit. Unique within a registry; which party or
/// adversary currently holds it is tracked by the registry, not the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitLabel(pub u64);

impl std::fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// One of the four preparable single-qubit states: the Z and X basis
/// eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingleQubitState {
    Zero,
    One,
    Plus,
    Minus,
}

impl SingleQubitState {
    /// Ket coefficients `[<0|s>, <1|s>]` (all real).
    pub fn ket(self) -> [f64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            SingleQubitState::Zero => [1.0, 0.0],
            SingleQubitState::One => [0.0, 1.0],
            SingleQubitState::Plus => [h, h],
            SingleQubitState::Minus => [h, -h],
        }
    }

    /// The basis this state is an eigenstate of.
    pub fn basis(self) -> MeasBasis {
        match self {
            SingleQubitState::Zero | SingleQubitState::One => MeasBasis::Z,
            SingleQubitState::Plus | SingleQubitState::Minus => MeasBasis::X,
        }
    }

    /// The outcome bit this state yields deterministically in its own basis.
    pub fn bit(self) -> u8 {
        match self {
            SingleQubitState::Zero | SingleQubitState::Plus => 0,
            SingleQubitState::One | SingleQubitState::Minus => 1,
        }
    }
}

impl std::fmt::Display for SingleQubitState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SingleQubitState::Zero => "|0>",
            SingleQubitState::One => "|1>",
            SingleQubitState::Plus => "|+>",
            SingleQubitState::Minus => "|->",
        })
    }
}

/// A normalized pure state over an ordered list of labeled qubits.
///
/// Amplitude indexing is big-endian in label order: the qubit at position
/// `q` of `labels()` contributes bit `(index >> (n-1-q)) & 1`, so for
/// labels (a, b, c) the amplitude of |101> sits at index 0b101.
#[derive(Debug, Clone)]
pub struct StateVector {
    labels: Vec<QubitLabel>,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Build from raw amplitudes. The vector is normalized; length must be
    /// `2^labels.len()` and labels must be distinct.
    pub fn new(labels: Vec<QubitLabel>, mut amps: Vec<Amplitude>) -> Result<Self, QuantumError> {
        check_distinct(&labels)?;
        assert_eq!(
            amps.len(),
            1usize << labels.len(),
            "amplitude vector length must be 2^(qubit count)"
        );
        let norm = l2_norm(&amps);
        assert!(norm > NORM_TOL, "cannot normalize a zero state");
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { labels, amps })
    }

    /// A computational basis state: qubit `labels[q]` takes value `bits[q]`.
    pub fn basis_state(labels: Vec<QubitLabel>, bits: &[u8]) -> Result<Self, QuantumError> {
        check_distinct(&labels)?;
        assert_eq!(labels.len(), bits.len());
        let n = labels.len();
        let mut amps = vec![Amplitude::new(0.0, 0.0); 1 << n];
        let mut idx = 0usize;
        for (q, &b) in bits.iter().enumerate() {
            idx |= usize::from(b & 1) << (n - 1 - q);
        }
        amps[idx] = Amplitude::new(1.0, 0.0);
        Ok(StateVector { labels, amps })
    }

    /// A single qubit prepared in one of the four basis states.
    pub fn single(label: QubitLabel, prep: SingleQubitState) -> Self {
        let k = prep.ket();
        StateVector {
            labels: vec![label],
            amps: vec![Amplitude::new(k[0], 0.0), Amplitude::new(k[1], 0.0)],
        }
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn qubit_count(&self) -> usize {
        self.labels.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    /// Amplitude of the computational basis state `bits` (in label order).
    pub fn amplitude_of(&self, bits: &[u8]) -> Amplitude {
        assert_eq!(bits.len(), self.labels.len());
        let n = self.labels.len();
        let mut idx = 0usize;
        for (q, &b) in bits.iter().enumerate() {
            idx |= usize::from(b & 1) << (n - 1 - q);
        }
        self.amps[idx]
    }

    pub fn position_of(&self, q: QubitLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == q)
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Tensor this state with another (labels concatenate).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QuantumError> {
        let mut labels = self.labels.clone();
        for &l in &other.labels {
            if self.labels.contains(&l) {
                return Err(QuantumError::DuplicateLabel(l));
            }
            labels.push(l);
        }
        let m = other.amps.len();
        let mut amps = Vec::with_capacity(self.amps.len() * m);
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { labels, amps })
    }

    /// Apply a single-qubit operation to the qubit with label `q`.
    pub fn apply_pauli(&mut self, q: QubitLabel, op: PauliOp) -> Result<(), QuantumError> {
        let pos = self.position_of(q).ok_or(QuantumError::UnknownLabel(q))?;
        if op == PauliOp::I {
            return Ok(());
        }
        let m = op.matrix();
        let n = self.labels.len();
        let stride = 1usize << (n - 1 - pos);
        let mut x0 = 0usize;
        while x0 < self.amps.len() {
            for x in x0..x0 + stride {
                let lo = self.amps[x];
                let hi = self.amps[x + stride];
                self.amps[x] = m[0][0] * lo + m[0][1] * hi;
                self.amps[x + stride] = m[1][0] * lo + m[1][1] * hi;
            }
            x0 += 2 * stride;
        }
        Ok(())
    }

    /// Probability of each outcome when measuring position `pos` in `basis`.
    pub(super) fn outcome_probabilities(&self, pos: usize, basis: MeasBasis) -> [f64; 2] {
        let bras = basis.bras();
        let n = self.labels.len();
        let stride = 1usize << (n - 1 - pos);
        let mut probs = [0.0f64; 2];
        for (o, bra) in bras.iter().enumerate() {
            let mut p = 0.0;
            let mut x0 = 0usize;
            while x0 < self.amps.len() {
                for x in x0..x0 + stride {
                    let w = bra[0] * self.amps[x] + bra[1] * self.amps[x + stride];
                    p += w.norm_sqr();
                }
                x0 += 2 * stride;
            }
            probs[o] = p;
        }
        probs
    }

    /// Collapse position `pos` onto outcome `outcome` of `basis` and
    /// renormalize. The qubit stays in the state as a definite qubit.
    pub(super) fn collapse(&mut self, pos: usize, basis: MeasBasis, outcome: u8, prob: f64) {
        let bra = basis.bras()[usize::from(outcome)];
        let n = self.labels.len();
        let stride = 1usize << (n - 1 - pos);
        let scale = 1.0 / prob.sqrt();
        let mut x0 = 0usize;
        while x0 < self.amps.len() {
            for x in x0..x0 + stride {
                let w = (bra[0] * self.amps[x] + bra[1] * self.amps[x + stride]) * scale;
                self.amps[x] = bra[0] * w;
                self.amps[x + stride] = bra[1] * w;
            }
            x0 += 2 * stride;
        }
    }
}

/// Conjugate-linear in the first argument. Both states must have identical
/// label sequences.
pub fn inner_product(s1: &StateVector, s2: &StateVector) -> Result<Amplitude, QuantumError> {
    if s1.labels != s2.labels {
        return Err(QuantumError::LabelMismatch);
    }
    Ok(s1
        .amps
        .iter()
        .zip(&s2.amps)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

fn l2_norm(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_distinct(labels: &[QubitLabel]) -> Result<(), QuantumError> {
    for (i, &l) in labels.iter().enumerate() {
        if labels[i + 1..].contains(&l) {
            return Err(QuantumError::DuplicateLabel(l));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(i: u64) -> QubitLabel {
        QubitLabel(i)
    }

    /// Direct 2x2 matrix-vector oracle for single-qubit states.
    fn mat_vec(m: [[Amplitude; 2]; 2], v: [Amplitude; 2]) -> [Amplitude; 2] {
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut s = StateVector::single(q(0), SingleQubitState::Plus);
        let before = s.amplitudes().to_vec();
        s.apply_pauli(q(0), PauliOp::I).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
    }

    #[test]
    fn iy_matches_matrix_oracle_on_all_four_preps() {
        for prep in [
            SingleQubitState::Zero,
            SingleQubitState::One,
            SingleQubitState::Plus,
            SingleQubitState::Minus,
        ] {
            let mut s = StateVector::single(q(0), prep);
            let expect = mat_vec(
                PauliOp::IY.matrix(),
                [s.amplitudes()[0], s.amplitudes()[1]],
            );
            s.apply_pauli(q(0), PauliOp::IY).unwrap();
            assert!((s.amplitudes()[0] - expect[0]).norm() < 1e-15);
            assert!((s.amplitudes()[1] - expect[1]).norm() < 1e-15);
        }
        // iY|0> = -|1>; iY|+> = |->
        let mut s = StateVector::single(q(0), SingleQubitState::Zero);
        s.apply_pauli(q(0), PauliOp::IY).unwrap();
        assert!((s.amplitudes()[1] + 1.0).norm() < 1e-15);
        let mut s = StateVector::single(q(0), SingleQubitState::Plus);
        s.apply_pauli(q(0), PauliOp::IY).unwrap();
        let minus = StateVector::single(q(0), SingleQubitState::Minus);
        let ip = inner_product(&minus, &s).unwrap();
        assert!((ip.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_label_is_an_error() {
        let mut s = StateVector::single(q(0), SingleQubitState::Zero);
        assert_eq!(
            s.apply_pauli(q(9), PauliOp::X),
            Err(QuantumError::UnknownLabel(q(9)))
        );
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = StateVector::basis_state(vec![q(1), q(1)], &[0, 0]).unwrap_err();
        assert_eq!(err, QuantumError::DuplicateLabel(q(1)));
    }

    #[test]
    fn inner_product_requires_identical_labels() {
        let a = StateVector::single(q(0), SingleQubitState::Zero);
        let b = StateVector::single(q(1), SingleQubitState::Zero);
        assert_eq!(inner_product(&a, &b), Err(QuantumError::LabelMismatch));
    }

    #[test]
    fn tensor_orders_labels_and_multiplies_amplitudes() {
        let a = StateVector::single(q(0), SingleQubitState::One);
        let b = StateVector::single(q(1), SingleQubitState::Zero);
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.labels(), &[q(0), q(1)]);
        assert!((ab.amplitude_of(&[1, 0]).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_preserves_norm() {
        let mut s = StateVector::new(
            vec![q(0), q(1)],
            vec![
                Amplitude::new(0.5, 0.0),
                Amplitude::new(0.5, 0.0),
                Amplitude::new(0.5, 0.0),
                Amplitude::new(-0.5, 0.0),
            ],
        )
        .unwrap();
        for op in PauliOp::ALL {
            s.apply_pauli(q(1), op).unwrap();
            assert!((s.norm() - 1.0).abs() < NORM_TOL);
        }
    }
}
