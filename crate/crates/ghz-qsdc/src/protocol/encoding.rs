//! Bit-to-Pauli encoding tables and announcement decoding.
//!
//! Alice encodes two bits per group (I -> 00, X -> 01, iY -> 10, Z -> 11);
//! every other party encodes one bit (I -> 0, iY -> 1). Because each
//! operation toggles the group's GHZ index by a constant GF(2) delta, the
//! announced (initial, measured) pair determines the total toggle, and a
//! party who knows its own operation can solve the linear system for
//! everyone else's — uniquely, as the exhaustive enumeration tests show.

use serde::{Deserialize, Serialize};

use super::session::Announcement;
use super::{PartyId, ProtocolError};
use crate::quantum::{IndexDelta, PauliOp};

/// One-bit encoding used by the non-Alice parties.
pub fn encode_bit(bit: u8) -> PauliOp {
    if bit & 1 == 0 {
        PauliOp::I
    } else {
        PauliOp::IY
    }
}

/// Inverse of [`encode_bit`]. Panics on X or Z, which the non-Alice
/// parties never apply.
pub fn decode_bit(op: PauliOp) -> u8 {
    match op {
        PauliOp::I => 0,
        PauliOp::IY => 1,
        other => panic!("{other} is not a one-bit encoding operation"),
    }
}

/// Two-bit encoding used by Alice.
pub fn encode_dibit(bits: [u8; 2]) -> PauliOp {
    match [bits[0] & 1, bits[1] & 1] {
        [0, 0] => PauliOp::I,
        [0, 1] => PauliOp::X,
        [1, 0] => PauliOp::IY,
        [1, 1] => PauliOp::Z,
        _ => unreachable!(),
    }
}

/// Inverse of [`encode_dibit`].
pub fn decode_dibit(op: PauliOp) -> [u8; 2] {
    match op {
        PauliOp::I => [0, 0],
        PauliOp::X => [0, 1],
        PauliOp::IY => [1, 0],
        PauliOp::Z => [1, 1],
    }
}

/// Everything one viewpoint recovered for a single message group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodedGroup {
    /// The full operation assignment that explains the announcement,
    /// indexed by party.
    pub ops: Vec<PauliOp>,
}

impl DecodedGroup {
    /// Alice's dibit under this assignment.
    pub fn alice_dibit(&self) -> [u8; 2] {
        decode_dibit(self.ops[0])
    }

    /// Party `j`'s bit under this assignment (j >= 1).
    pub fn party_bit(&self, j: usize) -> u8 {
        decode_bit(self.ops[j])
    }
}

/// One party's decoding of all message groups.
///
/// `groups[k]` is `None` when no operation assignment explains the k-th
/// announcement — possible only on a corrupted transcript, for example
/// when an adversary measured a returning particle and randomized the
/// phase bit. A plain bit flip decodes fine (to wrong bits) and is only
/// caught by the reveal check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodedView {
    pub viewer: PartyId,
    pub groups: Vec<Option<DecodedGroup>>,
}

impl DecodedView {
    /// Alice's dibits as seen by this viewer (self-view returns the
    /// viewer's own known ops, which is exact).
    pub fn alice_dibits(&self) -> Vec<Option<[u8; 2]>> {
        self.groups
            .iter()
            .map(|g| g.as_ref().map(DecodedGroup::alice_dibit))
            .collect()
    }

    /// Party `j`'s bits as seen by this viewer.
    pub fn party_bits(&self, j: usize) -> Vec<Option<u8>> {
        self.groups
            .iter()
            .map(|g| g.as_ref().map(|d| d.party_bit(j)))
            .collect()
    }

    pub fn failed_groups(&self) -> usize {
        self.groups.iter().filter(|g| g.is_none()).count()
    }
}

/// Solve one announcement delta for the other parties' operations.
///
/// `viewer` knows it applied `own_op`; `delta` is the toggle from the
/// announced initial index to the measured one. Returns the unique full
/// assignment (including the viewer's own op), or `None` when the phase
/// equation is inconsistent. For non-Alice viewers every delta is
/// solvable; for Alice the phase bit is redundant and acts as a parity
/// check on the announcement.
pub fn solve_group(
    parties: u8,
    viewer: PartyId,
    own_op: PauliOp,
    delta: &IndexDelta,
) -> Option<Vec<PauliOp>> {
    let n = usize::from(parties);
    debug_assert_eq!(delta.qubit_count(), n);
    // Unknowns: Alice's (alpha, beta) with op = alpha-X part, beta-Z part;
    // gamma_j in {0,1} for party j >= 1 (iY or not). Pattern equations:
    //   dp[0] = alpha ^ gamma_{n-1}
    //   dp[j] = gamma_j ^ gamma_{n-1}   (1 <= j <= n-2)
    // Phase equation:
    //   ds = beta ^ gamma_1 ^ ... ^ gamma_{n-1}
    let mut gamma = vec![0u8; n]; // gamma[0] unused
    let (alpha, beta);
    let last = n - 1;
    if viewer.is_alice() {
        (alpha, beta) = op_xz_parts(own_op);
        gamma[last] = delta.pattern_bit(0) ^ alpha;
        for j in 1..last {
            gamma[j] = delta.pattern_bit(j) ^ gamma[last];
        }
        let parity: u8 = gamma[1..].iter().fold(beta, |acc, &g| acc ^ g);
        if parity != delta.phase_bit() {
            return None;
        }
    } else {
        let r = viewer.index();
        gamma[r] = decode_bit(own_op);
        gamma[last] = if r == last {
            gamma[r]
        } else {
            delta.pattern_bit(r) ^ gamma[r]
        };
        for j in 1..last {
            if j != r {
                gamma[j] = delta.pattern_bit(j) ^ gamma[last];
            }
        }
        alpha = delta.pattern_bit(0) ^ gamma[last];
        beta = gamma[1..]
            .iter()
            .fold(delta.phase_bit(), |acc, &g| acc ^ g);
    }
    let mut ops = Vec::with_capacity(n);
    ops.push(op_from_xz_parts(alpha, beta));
    for &g in &gamma[1..] {
        ops.push(encode_bit(g));
    }
    debug_assert_eq!(ops[viewer.index()], own_op);
    Some(ops)
}

/// (X part, Z part) of an encoding op: iY counts as both.
fn op_xz_parts(op: PauliOp) -> (u8, u8) {
    match op {
        PauliOp::I => (0, 0),
        PauliOp::X => (1, 0),
        PauliOp::IY => (1, 1),
        PauliOp::Z => (0, 1),
    }
}

fn op_from_xz_parts(alpha: u8, beta: u8) -> PauliOp {
    match (alpha & 1, beta & 1) {
        (0, 0) => PauliOp::I,
        (1, 0) => PauliOp::X,
        (1, 1) => PauliOp::IY,
        (0, 1) => PauliOp::Z,
        _ => unreachable!(),
    }
}

/// Decode every announced message group from one party's viewpoint.
///
/// `own_ops[k]` is the operation the viewer applied to the k-th message
/// group. Unsolvable groups are recorded as `None` rather than failing the
/// whole decoding, so a tampered session still yields a comparable view.
pub fn decode_others(
    parties: u8,
    viewer: PartyId,
    own_ops: &[PauliOp],
    announcements: &[Announcement],
) -> Result<DecodedView, ProtocolError> {
    if own_ops.len() != announcements.len() {
        return Err(ProtocolError::InvalidPlan(format!(
            "viewer knows {} own ops but {} groups were announced",
            own_ops.len(),
            announcements.len()
        )));
    }
    let groups = announcements
        .iter()
        .zip(own_ops)
        .map(|(ann, &op)| {
            let delta = ann.initial.delta_to(&ann.measured);
            solve_group(parties, viewer, op, &delta).map(|ops| DecodedGroup { ops })
        })
        .collect();
    Ok(DecodedView { viewer, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli_delta, GhzIndex};

    /// The toggle of a full operation assignment, from per-qubit deltas.
    fn assignment_delta(ops: &[PauliOp]) -> IndexDelta {
        let n = ops.len();
        ops.iter()
            .enumerate()
            .fold(IndexDelta::zero(n), |acc, (q, &op)| {
                acc.compose(&pauli_delta(op, q, n).expect("position in range"))
            })
    }

    fn idx(label: &str) -> GhzIndex {
        GhzIndex::from_paper_label(label).unwrap()
    }

    #[test]
    fn tables_match_the_agreed_encoding() {
        assert_eq!(encode_dibit([0, 1]), PauliOp::X);
        assert_eq!(encode_dibit([1, 0]), PauliOp::IY);
        assert_eq!(encode_dibit([1, 1]), PauliOp::Z);
        assert_eq!(encode_bit(1), PauliOp::IY);
        assert_eq!(encode_bit(0), PauliOp::I);
        for op in PauliOp::ALL {
            assert_eq!(encode_dibit(decode_dibit(op)), op);
        }
        for b in 0..2u8 {
            assert_eq!(decode_bit(encode_bit(b)), b);
        }
    }

    #[test]
    fn worked_example_from_all_three_viewpoints() {
        let delta = idx("000").delta_to(&idx("101"));
        // Alice applied X: reads Bob 0, Charlie 1.
        let ops = solve_group(3, PartyId(0), PauliOp::X, &delta).unwrap();
        assert_eq!(ops, vec![PauliOp::X, PauliOp::I, PauliOp::IY]);
        // Bob applied I: reads Alice 01, Charlie 1.
        let ops = solve_group(3, PartyId(1), PauliOp::I, &delta).unwrap();
        assert_eq!(decode_dibit(ops[0]), [0, 1]);
        assert_eq!(decode_bit(ops[2]), 1);
        // Charlie applied iY: reads Alice 01, Bob 0.
        let ops = solve_group(3, PartyId(2), PauliOp::IY, &delta).unwrap();
        assert_eq!(decode_dibit(ops[0]), [0, 1]);
        assert_eq!(decode_bit(ops[1]), 0);
    }

    #[test]
    fn identity_announcement_decodes_to_zeros() {
        let delta = idx("000").delta_to(&idx("000"));
        for viewer in 0..3u8 {
            let ops = solve_group(3, PartyId(viewer), PauliOp::I, &delta).unwrap();
            assert!(ops.iter().all(|&op| op == PauliOp::I));
        }
    }

    #[test]
    fn alice_detects_phase_inconsistency() {
        // Flip only the phase of the worked-example announcement: no
        // assignment with Alice's X explains it.
        let delta = idx("000").delta_to(&idx("100"));
        assert!(solve_group(3, PartyId(0), PauliOp::X, &delta).is_none());
        // Non-Alice viewers always find a (wrong) solution instead.
        assert!(solve_group(3, PartyId(1), PauliOp::I, &delta).is_some());
    }

    #[test]
    fn solve_inverts_every_assignment_exhaustively() {
        // For every n <= 6, initial index irrelevant: enumerate all op
        // assignments, compute their delta, and check each viewpoint
        // recovers exactly the assignment from its own op alone.
        for n in 3..=6usize {
            for alice_op in PauliOp::ALL {
                for rest in 0..(1u32 << (n - 1)) {
                    let mut ops = vec![alice_op];
                    for j in 0..n - 1 {
                        ops.push(encode_bit(((rest >> j) & 1) as u8));
                    }
                    let delta = assignment_delta(&ops);
                    for viewer in 0..n {
                        let got =
                            solve_group(n as u8, PartyId(viewer as u8), ops[viewer], &delta)
                                .expect("honest delta must solve");
                        assert_eq!(got, ops, "n={n} viewer={viewer}");
                    }
                }
            }
        }
    }
}
