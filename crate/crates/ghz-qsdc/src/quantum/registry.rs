//! Registry of disjoint subsystems for one group of particles.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    Amplitude, GhzIndex, MeasBasis, PauliOp, QuantumError, QubitLabel, SingleQubitState,
    StateVector, NORM_TOL,
};

/// Who currently possesses a qubit: a protocol party (by index, 0 = the
/// preparer) or the adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Holder {
    Party(u8),
    Adversary,
}

impl std::fmt::Display for Holder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Holder::Party(i) => write!(f, "party{i}"),
            Holder::Adversary => f.write_str("adversary"),
        }
    }
}

/// A set of pairwise label-disjoint [`StateVector`]s covering all live
/// qubits of one group, plus the holder of each label.
///
/// Subsystems stay factored until an operation genuinely couples them;
/// only [`QuantumRegistry::ghz_measure`] merges, and only the subsystems
/// that contain a measured label.
#[derive(Debug, Clone, Default)]
pub struct QuantumRegistry {
    subsystems: Vec<StateVector>,
    holders: BTreeMap<QubitLabel, Holder>,
    next_id: u64,
}

impl QuantumRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocate `count` fresh labels unique within this registry.
    pub fn alloc_labels(&mut self, count: usize) -> Vec<QubitLabel> {
        (0..count).map(|_| self.fresh_label()).collect()
    }

    pub fn fresh_label(&mut self) -> QubitLabel {
        let l = QubitLabel(self.next_id);
        self.next_id += 1;
        l
    }

    /// Insert a state as a new subsystem; all its labels get `holder`.
    pub fn insert_state(&mut self, state: StateVector, holder: Holder) -> Result<(), QuantumError> {
        for &l in state.labels() {
            if self.holders.contains_key(&l) {
                return Err(QuantumError::DuplicateLabel(l));
            }
        }
        for &l in state.labels() {
            self.holders.insert(l, holder);
            self.next_id = self.next_id.max(l.0 + 1);
        }
        self.subsystems.push(state);
        Ok(())
    }

    /// Prepare a fresh single qubit in `prep`, returning its label.
    pub fn insert_single(&mut self, prep: SingleQubitState, holder: Holder) -> QubitLabel {
        let label = self.fresh_label();
        self.subsystems.push(StateVector::single(label, prep));
        self.holders.insert(label, holder);
        label
    }

    pub fn labels(&self) -> impl Iterator<Item = QubitLabel> + '_ {
        self.holders.keys().copied()
    }

    pub fn contains(&self, q: QubitLabel) -> bool {
        self.holders.contains_key(&q)
    }

    pub fn holder(&self, q: QubitLabel) -> Result<Holder, QuantumError> {
        self.holders
            .get(&q)
            .copied()
            .ok_or(QuantumError::UnknownLabel(q))
    }

    pub fn set_holder(&mut self, q: QubitLabel, holder: Holder) -> Result<(), QuantumError> {
        match self.holders.get_mut(&q) {
            Some(h) => {
                *h = holder;
                Ok(())
            }
            None => Err(QuantumError::UnknownLabel(q)),
        }
    }

    pub fn subsystems(&self) -> &[StateVector] {
        &self.subsystems
    }

    fn subsystem_of(&self, q: QubitLabel) -> Result<usize, QuantumError> {
        self.subsystems
            .iter()
            .position(|s| s.position_of(q).is_some())
            .ok_or(QuantumError::UnknownLabel(q))
    }

    /// Apply a single-qubit operation to the qubit `q`, wherever it lives.
    pub fn apply_pauli(&mut self, q: QubitLabel, op: PauliOp) -> Result<(), QuantumError> {
        let s = self.subsystem_of(q)?;
        self.subsystems[s].apply_pauli(q, op)
    }

    /// Measure qubit `q` in `basis`; Born-rule sample, collapse, and
    /// renormalize its subsystem. The qubit stays in the subsystem as a
    /// definite qubit. Returns the outcome bit (see [`MeasBasis`]).
    pub fn measure_single<R: Rng>(
        &mut self,
        q: QubitLabel,
        basis: MeasBasis,
        rng: &mut R,
    ) -> Result<u8, QuantumError> {
        let s = self.subsystem_of(q)?;
        let state = &mut self.subsystems[s];
        let pos = state.position_of(q).expect("label just located");
        let probs = state.outcome_probabilities(pos, basis);
        debug_assert!((probs[0] + probs[1] - 1.0).abs() < NORM_TOL);
        let outcome = sample_two(probs, rng);
        state.collapse(pos, basis, outcome, probs[usize::from(outcome)]);
        Ok(outcome)
    }

    /// Measure several qubits in the same basis, collapsing sequentially in
    /// the given order; the joint outcome distribution does not depend on
    /// that order. Returns outcome bits in argument order.
    pub fn measure_joint<R: Rng>(
        &mut self,
        qs: &[QubitLabel],
        basis: MeasBasis,
        rng: &mut R,
    ) -> Result<Vec<u8>, QuantumError> {
        qs.iter()
            .map(|&q| self.measure_single(q, basis, rng))
            .collect()
    }

    /// Projective measurement of `qs` (in order) in the GHZ basis.
    ///
    /// Merges every subsystem containing one of `qs` into a joint state,
    /// samples an index with probability |(P_idx (x) 1)|Phi>|^2, and
    /// collapses onto it. The 2^n projectors are complete on the `qs`
    /// factor, so the probabilities sum to one.
    pub fn ghz_measure<R: Rng>(
        &mut self,
        qs: &[QubitLabel],
        rng: &mut R,
    ) -> Result<GhzIndex, QuantumError> {
        let merged = self.merge_containing(qs)?;
        let state = &mut self.subsystems[merged];
        let weights = ghz_projection_weights(state, qs)?;
        let total: f64 = weights.iter().sum();
        debug_assert!((total - 1.0).abs() < NORM_TOL, "projector weights sum to {total}");
        let pick = sample_index(&weights, rng);
        let idx = GhzIndex::from_rank(qs.len(), pick as u32).expect("rank in range");
        collapse_onto_ghz(state, qs, &idx, weights[pick]);
        Ok(idx)
    }

    /// The Born probabilities of each GHZ index (in rank order) that
    /// [`QuantumRegistry::ghz_measure`] would sample from, computed without
    /// collapsing anything.
    pub fn ghz_outcome_probabilities(&self, qs: &[QubitLabel]) -> Result<Vec<f64>, QuantumError> {
        let mut scratch = self.clone();
        let merged = scratch.merge_containing(qs)?;
        ghz_projection_weights(&scratch.subsystems[merged], qs)
    }

    /// Merge all subsystems containing any of `qs` into one; returns its
    /// position in the subsystem list.
    fn merge_containing(&mut self, qs: &[QubitLabel]) -> Result<usize, QuantumError> {
        for (i, &q) in qs.iter().enumerate() {
            if qs[i + 1..].contains(&q) {
                return Err(QuantumError::DuplicateLabel(q));
            }
        }
        let mut involved = Vec::new();
        for &q in qs {
            let s = self.subsystem_of(q)?;
            if !involved.contains(&s) {
                involved.push(s);
            }
        }
        involved.sort_unstable();
        let mut merged = self.subsystems.remove(involved[0]);
        // Remove back to front so earlier indices stay valid.
        for &s in involved[1..].iter().rev() {
            let other = self.subsystems.remove(s - 1);
            merged = merged.tensor(&other)?;
        }
        self.subsystems.push(merged);
        Ok(self.subsystems.len() - 1)
    }
}

/// Weight of each GHZ projector (rank order) on the `qs` factor of `state`.
fn ghz_projection_weights(state: &StateVector, qs: &[QubitLabel]) -> Result<Vec<f64>, QuantumError> {
    let n = qs.len();
    let layout = BitLayout::new(state, qs)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut weights = Vec::with_capacity(1 << n);
    for idx in GhzIndex::all(n) {
        let x0 = layout.deposit_measured(idx.first_term());
        let x1 = layout.deposit_measured(idx.second_term());
        let sign = idx.second_sign();
        let mut p = 0.0;
        for y in 0..layout.rest_count() {
            let rest = layout.deposit_rest(y);
            let w = (state.amplitudes()[x0 | rest] + sign * state.amplitudes()[x1 | rest]) * h;
            p += w.norm_sqr();
        }
        weights.push(p);
    }
    Ok(weights)
}

/// Collapse `state` onto GHZ index `idx` of the `qs` factor (probability
/// `prob`), renormalizing.
fn collapse_onto_ghz(state: &mut StateVector, qs: &[QubitLabel], idx: &GhzIndex, prob: f64) {
    let layout = BitLayout::new(state, qs).expect("labels already validated");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = idx.second_sign();
    let x0 = layout.deposit_measured(idx.first_term());
    let x1 = layout.deposit_measured(idx.second_term());
    let scale = 1.0 / prob.sqrt();
    let mut amps = vec![Amplitude::new(0.0, 0.0); state.amplitudes().len()];
    for y in 0..layout.rest_count() {
        let rest = layout.deposit_rest(y);
        let w = (state.amplitudes()[x0 | rest] + sign * state.amplitudes()[x1 | rest]) * h * scale;
        amps[x0 | rest] = w * h;
        amps[x1 | rest] = w * h * sign;
    }
    *state = StateVector::new(state.labels().to_vec(), amps).expect("collapsed state normalizable");
}

/// Maps between (measured-qubit bits, rest bits) and full amplitude
/// indices of a state.
struct BitLayout {
    /// Shift of each measured qubit within the full index, in `qs` order.
    measured_shifts: Vec<u32>,
    /// Shifts of the remaining qubits, in label order.
    rest_shifts: Vec<u32>,
}

impl BitLayout {
    fn new(state: &StateVector, qs: &[QubitLabel]) -> Result<Self, QuantumError> {
        let total = state.qubit_count();
        let mut measured_shifts = Vec::with_capacity(qs.len());
        let mut taken = vec![false; total];
        for &q in qs {
            let pos = state
                .position_of(q)
                .ok_or(QuantumError::UnknownLabel(q))?;
            measured_shifts.push((total - 1 - pos) as u32);
            taken[pos] = true;
        }
        let rest_shifts = (0..total)
            .filter(|&p| !taken[p])
            .map(|p| (total - 1 - p) as u32)
            .collect();
        Ok(BitLayout {
            measured_shifts,
            rest_shifts,
        })
    }

    fn rest_count(&self) -> usize {
        1 << self.rest_shifts.len()
    }

    /// Spread bits of `b` (bit j = measured qubit j, big-endian in `qs`
    /// order as produced by [`GhzIndex::first_term`]) into a full index.
    fn deposit_measured(&self, b: usize) -> usize {
        let n = self.measured_shifts.len();
        let mut x = 0usize;
        for (j, &shift) in self.measured_shifts.iter().enumerate() {
            x |= ((b >> (n - 1 - j)) & 1) << shift;
        }
        x
    }

    /// Spread bits of `y` over the rest qubits.
    fn deposit_rest(&self, y: usize) -> usize {
        let k = self.rest_shifts.len();
        let mut x = 0usize;
        for (j, &shift) in self.rest_shifts.iter().enumerate() {
            x |= ((y >> (k - 1 - j)) & 1) << shift;
        }
        x
    }
}

fn sample_two<R: Rng>(probs: [f64; 2], rng: &mut R) -> u8 {
    if rng.gen::<f64>() < probs[0] {
        0
    } else {
        1
    }
}

fn sample_index<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_nonzero = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    last_nonzero
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ghz_state;
    use crate::rng::stream;

    fn reg_with_ghz(label: &str) -> (QuantumRegistry, Vec<QubitLabel>) {
        let idx = GhzIndex::from_paper_label(label).unwrap();
        let mut reg = QuantumRegistry::new();
        let labels = reg.alloc_labels(idx.qubit_count());
        let state = ghz_state(idx, &labels).unwrap();
        reg.insert_state(state, Holder::Party(0)).unwrap();
        (reg, labels)
    }

    #[test]
    fn eigenstate_measures_deterministically() {
        let mut reg = QuantumRegistry::new();
        let q = reg.insert_single(SingleQubitState::One, Holder::Party(1));
        let mut rng = stream(1, "t", 0);
        for _ in 0..20 {
            assert_eq!(reg.measure_single(q, MeasBasis::Z, &mut rng).unwrap(), 1);
        }
        let p = reg.insert_single(SingleQubitState::Plus, Holder::Party(1));
        for _ in 0..20 {
            assert_eq!(reg.measure_single(p, MeasBasis::X, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn ghz_qubit_is_maximally_mixed_in_z() {
        // Oracle: partial trace of one GHZ qubit is I/2, so both outcomes
        // must appear with frequency about one half.
        let mut rng = stream(2, "t", 0);
        let mut ones = 0u32;
        let trials = 4000;
        for _ in 0..trials {
            let (mut reg, labels) = reg_with_ghz("000");
            ones += u32::from(reg.measure_single(labels[0], MeasBasis::Z, &mut rng).unwrap());
        }
        let f = f64::from(ones) / f64::from(trials);
        assert!((f - 0.5).abs() < 0.03, "frequency {f}");
    }

    #[test]
    fn joint_z_outcomes_are_perfectly_correlated() {
        let mut rng = stream(3, "t", 0);
        for _ in 0..200 {
            let (mut reg, labels) = reg_with_ghz("000");
            let out = reg.measure_joint(&labels, MeasBasis::Z, &mut rng).unwrap();
            assert!(out == vec![0, 0, 0] || out == vec![1, 1, 1], "outcome {out:?}");
        }
    }

    #[test]
    fn joint_x_outcomes_have_even_minus_count_for_phase_zero() {
        let mut rng = stream(4, "t", 0);
        for _ in 0..200 {
            let (mut reg, labels) = reg_with_ghz("000");
            let out = reg.measure_joint(&labels, MeasBasis::X, &mut rng).unwrap();
            let minus: u8 = out.iter().sum();
            assert_eq!(minus % 2, 0, "outcome {out:?}");
        }
        for _ in 0..200 {
            let (mut reg, labels) = reg_with_ghz("001");
            let out = reg.measure_joint(&labels, MeasBasis::X, &mut rng).unwrap();
            let minus: u8 = out.iter().sum();
            assert_eq!(minus % 2, 1, "outcome {out:?}");
        }
    }

    #[test]
    fn ghz_measure_is_deterministic_on_basis_states() {
        let mut rng = stream(5, "t", 0);
        for label in ["101", "000", "110", "011"] {
            let (mut reg, labels) = reg_with_ghz(label);
            let got = reg.ghz_measure(&labels, &mut rng).unwrap();
            assert_eq!(got.paper_label(), label);
        }
    }

    #[test]
    fn ghz_probabilities_sum_to_one_with_fakes() {
        let (mut reg, labels) = reg_with_ghz("000");
        let fake_b = reg.insert_single(SingleQubitState::Zero, Holder::Party(1));
        let fake_c = reg.insert_single(SingleQubitState::Zero, Holder::Party(2));
        let qs = [labels[0], fake_b, fake_c];
        let probs = reg.ghz_outcome_probabilities(&qs).unwrap();
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < NORM_TOL);
        // Probabilities must be 1/4 on the four indices whose pattern puts
        // the fake B qubit at 0 in the first term, and zero elsewhere.
        for idx in GhzIndex::all(3) {
            let expect = if idx.pattern_bit(1) == 0 { 0.25 } else { 0.0 };
            assert!(
                (probs[idx.rank() as usize] - expect).abs() < 1e-12,
                "idx {idx}: {probs:?}"
            );
        }
    }

    #[test]
    fn ghz_measure_collapses_and_repeats() {
        let mut rng = stream(6, "t", 0);
        let (mut reg, labels) = reg_with_ghz("000");
        let fake_b = reg.insert_single(SingleQubitState::Zero, Holder::Party(1));
        let fake_c = reg.insert_single(SingleQubitState::One, Holder::Party(2));
        let qs = [labels[0], fake_b, fake_c];
        let first = reg.ghz_measure(&qs, &mut rng).unwrap();
        for _ in 0..10 {
            assert_eq!(reg.ghz_measure(&qs, &mut rng).unwrap(), first);
        }
    }

    #[test]
    fn duplicate_and_unknown_labels_rejected() {
        let (mut reg, labels) = reg_with_ghz("000");
        let mut rng = stream(7, "t", 0);
        assert!(matches!(
            reg.ghz_measure(&[labels[0], labels[0], labels[1]], &mut rng),
            Err(QuantumError::DuplicateLabel(_))
        ));
        assert!(matches!(
            reg.measure_single(QubitLabel(99), MeasBasis::Z, &mut rng),
            Err(QuantumError::UnknownLabel(_))
        ));
        assert!(matches!(
            reg.apply_pauli(QubitLabel(99), PauliOp::X),
            Err(QuantumError::UnknownLabel(_))
        ));
    }

    #[test]
    fn holders_track_possession() {
        let (mut reg, labels) = reg_with_ghz("000");
        assert_eq!(reg.holder(labels[1]).unwrap(), Holder::Party(0));
        reg.set_holder(labels[1], Holder::Adversary).unwrap();
        assert_eq!(reg.holder(labels[1]).unwrap(), Holder::Adversary);
        assert!(reg.holder(QubitLabel(42)).is_err());
    }
}
