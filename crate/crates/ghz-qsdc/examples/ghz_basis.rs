//! Print the eight three-qubit GHZ basis states in the computational (Z)
//! basis and the X product basis, showing the correlation structure the
//! eavesdropping check relies on: Z outcomes are one of the two terms,
//! and the parity of `-` results in the X basis equals the phase bit.

use ghz_qsdc::{ghz_state, outcome_is_consistent, GhzIndex, MeasBasis, QubitLabel};

fn main() {
    let labels: Vec<QubitLabel> = (0..3).map(QubitLabel).collect();
    for idx in GhzIndex::all(3) {
        let state = ghz_state(idx, &labels).expect("three labels");
        print!("|psi_{}> =", idx.paper_label());
        let mut first = true;
        for (i, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm() < 1e-12 {
                continue;
            }
            let sign = if amp.re < 0.0 {
                " - "
            } else if first {
                " "
            } else {
                " + "
            };
            print!("{sign}|{:03b}>/sqrt(2)", i);
            first = false;
        }
        println!();

        let consistent_z: Vec<String> = (0..8u8)
            .map(|o| [o >> 2 & 1, o >> 1 & 1, o & 1])
            .filter(|bits| outcome_is_consistent(&idx, MeasBasis::Z, bits).unwrap())
            .map(|bits| MeasBasis::Z.outcome_string(&bits))
            .collect();
        let consistent_x: Vec<String> = (0..8u8)
            .map(|o| [o >> 2 & 1, o >> 1 & 1, o & 1])
            .filter(|bits| outcome_is_consistent(&idx, MeasBasis::X, bits).unwrap())
            .map(|bits| MeasBasis::X.outcome_string(&bits))
            .collect();
        println!("    Z outcomes: {}", consistent_z.join(", "));
        println!("    X outcomes: {}", consistent_x.join(", "));
    }
}
