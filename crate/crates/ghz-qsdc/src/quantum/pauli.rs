//! The single-qubit operations and measurement bases of the protocol.

use serde::{Deserialize, Serialize};

use super::Amplitude;

/// The four encoding unitaries.
///
/// `IY` is the real matrix |0><1| - |1><0| (determinant +1), i.e. i times
/// the Pauli Y; the protocol never needs Y itself, and keeping the matrix
/// real keeps every protocol state real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PauliOp {
    I,
    X,
    #[serde(rename = "iY")]
    IY,
    Z,
}

impl PauliOp {
    /// All four operations, in encoding-table order.
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::IY, PauliOp::Z];

    /// The 2x2 matrix, row-major: `m[r][c]` = <r|op|c>.
    pub fn matrix(self) -> [[Amplitude; 2]; 2] {
        let one = Amplitude::new(1.0, 0.0);
        let zero = Amplitude::new(0.0, 0.0);
        match self {
            PauliOp::I => [[one, zero], [zero, one]],
            PauliOp::X => [[zero, one], [one, zero]],
            PauliOp::IY => [[zero, one], [-one, zero]],
            PauliOp::Z => [[one, zero], [zero, -one]],
        }
    }
}

impl std::fmt::Display for PauliOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PauliOp::I => "I",
            PauliOp::X => "X",
            PauliOp::IY => "iY",
            PauliOp::Z => "Z",
        })
    }
}

/// A single-qubit measurement basis.
///
/// `Z` outcomes are 0/1 for |0>/|1>; `X` outcomes are 0/1 for |+>/|->,
/// with |+-> = (|0> +- |1>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasBasis {
    Z,
    X,
}

impl MeasBasis {
    /// Bra vectors of the two outcomes: `bras()[outcome] = [<e|0>, <e|1>]`.
    ///
    /// All four vectors are real, so bra and ket coefficients coincide.
    pub fn bras(self) -> [[f64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            MeasBasis::Z => [[1.0, 0.0], [0.0, 1.0]],
            MeasBasis::X => [[h, h], [h, -h]],
        }
    }

    /// Render one outcome bit in this basis's conventional alphabet.
    pub fn outcome_char(self, bit: u8) -> char {
        match (self, bit) {
            (MeasBasis::Z, 0) => '0',
            (MeasBasis::Z, _) => '1',
            (MeasBasis::X, 0) => '+',
            (MeasBasis::X, _) => '-',
        }
    }

    /// Render an outcome bit string, e.g. `"001"` or `"+--"`.
    pub fn outcome_string(self, bits: &[u8]) -> String {
        bits.iter().map(|&b| self.outcome_char(b)).collect()
    }
}

impl std::fmt::Display for MeasBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasBasis::Z => "Z",
            MeasBasis::X => "X",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iy_matrix_is_real_with_unit_determinant() {
        let m = PauliOp::IY.matrix();
        for row in &m {
            for a in row {
                assert_eq!(a.im, 0.0);
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert_eq!(det, Amplitude::new(1.0, 0.0));
        // iY|0> = -|1>, iY|1> = |0>
        assert_eq!(m[1][0], Amplitude::new(-1.0, 0.0));
        assert_eq!(m[0][1], Amplitude::new(1.0, 0.0));
    }

    #[test]
    fn x_basis_vectors_are_plus_minus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(MeasBasis::X.bras()[0], [h, h]);
        assert_eq!(MeasBasis::X.bras()[1], [h, -h]);
    }

    #[test]
    fn outcome_rendering() {
        assert_eq!(MeasBasis::Z.outcome_string(&[0, 0, 1]), "001");
        assert_eq!(MeasBasis::X.outcome_string(&[0, 1, 1]), "+--");
    }
}
