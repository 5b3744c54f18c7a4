//! Fast invariant suite behind `qsdc selftest`.
//!
//! Smaller-scale versions of the checks the integration tests run in
//! full: the three-qubit GHZ family against hard-coded amplitude tables
//! in both bases, toggle algebra against the dense simulator, decode
//! inversion, attack-free round trips, the attack error rates, and
//! experiment determinism.

use super::{run_experiment, ExperimentSpec};
use crate::adversary::{AdversarySpec, FakePrep, InterceptResendConfig};
use crate::protocol::{
    run_session, solve_group, MessagePlan, PartyId, SessionConfig, SessionStatus,
};
use crate::quantum::{
    ghz_state, inner_product, pauli_delta, GhzIndex, IndexDelta, PauliOp, QubitLabel,
    SingleQubitState, StateVector,
};
use crate::rng::stream;

/// Outcome of one self-test check.
#[derive(Debug, Clone)]
pub struct SelfTestResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SelfTestResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        SelfTestResult {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        SelfTestResult {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

/// Run every check; all should pass in well under a second.
pub fn run_selftest() -> Vec<SelfTestResult> {
    vec![
        ghz_basis_tables(),
        toggle_algebra(),
        decode_inversion(),
        session_round_trip(),
        attack_error_rates(),
        experiment_determinism(),
    ]
}

/// The eight three-qubit GHZ states, amplitude by amplitude: the two
/// computational terms and the four X-product terms of each.
const Z_TABLE: [(&str, [(&str, f64); 2]); 8] = [
    ("000", [("000", 1.0), ("111", 1.0)]),
    ("001", [("000", 1.0), ("111", -1.0)]),
    ("010", [("100", 1.0), ("011", 1.0)]),
    ("011", [("100", 1.0), ("011", -1.0)]),
    ("100", [("010", 1.0), ("101", 1.0)]),
    ("101", [("010", 1.0), ("101", -1.0)]),
    ("110", [("110", 1.0), ("001", 1.0)]),
    ("111", [("110", 1.0), ("001", -1.0)]),
];

const X_TABLE: [(&str, [(&str, f64); 4]); 8] = [
    ("000", [("+++", 1.0), ("+--", 1.0), ("-+-", 1.0), ("--+", 1.0)]),
    ("001", [("++-", 1.0), ("+-+", 1.0), ("-++", 1.0), ("---", 1.0)]),
    ("010", [("+++", 1.0), ("+--", 1.0), ("-+-", -1.0), ("--+", -1.0)]),
    ("011", [("++-", 1.0), ("+-+", 1.0), ("-++", -1.0), ("---", -1.0)]),
    ("100", [("+++", 1.0), ("+--", -1.0), ("-+-", 1.0), ("--+", -1.0)]),
    ("101", [("++-", 1.0), ("+-+", -1.0), ("-++", 1.0), ("---", -1.0)]),
    ("110", [("+++", 1.0), ("+--", -1.0), ("-+-", -1.0), ("--+", 1.0)]),
    ("111", [("++-", 1.0), ("+-+", -1.0), ("-++", -1.0), ("---", 1.0)]),
];

fn labels(n: usize) -> Vec<QubitLabel> {
    (0..n as u64).map(QubitLabel).collect()
}

/// Product state over labels 0..n for an X-alphabet string like "+--".
pub(crate) fn x_product_state(pattern: &str) -> StateVector {
    let mut state: Option<StateVector> = None;
    for (q, c) in pattern.chars().enumerate() {
        let prep = if c == '+' {
            SingleQubitState::Plus
        } else {
            SingleQubitState::Minus
        };
        let single = StateVector::single(QubitLabel(q as u64), prep);
        state = Some(match state {
            None => single,
            Some(s) => s.tensor(&single).expect("distinct labels"),
        });
    }
    state.expect("nonempty pattern")
}

fn ghz_basis_tables() -> SelfTestResult {
    const NAME: &str = "ghz-basis-tables";
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (label, terms) in Z_TABLE {
        let idx = GhzIndex::from_paper_label(label).expect("table label");
        let state = ghz_state(idx, &labels(3)).expect("three labels");
        let mut expect = vec![0.0f64; 8];
        for (bits, sign) in terms {
            let position = usize::from_str_radix(bits, 2).expect("bits");
            expect[position] = sign * h;
        }
        for (i, want) in expect.iter().enumerate() {
            let got = state.amplitudes()[i];
            if (got.re - want).abs() > 1e-12 || got.im.abs() > 1e-12 {
                return SelfTestResult::fail(
                    NAME,
                    format!("state {label}: Z amplitude {i} is {got}, want {want}"),
                );
            }
        }
    }
    for (label, terms) in X_TABLE {
        let idx = GhzIndex::from_paper_label(label).expect("table label");
        let state = ghz_state(idx, &labels(3)).expect("three labels");
        for mask in 0..8u32 {
            let pattern: String = (0..3)
                .map(|q| if mask >> (2 - q) & 1 == 0 { '+' } else { '-' })
                .collect();
            let want = terms
                .iter()
                .find(|(p, _)| *p == pattern)
                .map_or(0.0, |(_, sign)| sign * 0.5);
            let amp = inner_product(&x_product_state(&pattern), &state).expect("same labels");
            if (amp.re - want).abs() > 1e-12 || amp.im.abs() > 1e-12 {
                return SelfTestResult::fail(
                    NAME,
                    format!("state {label}: X amplitude at {pattern} is {amp}, want {want}"),
                );
            }
        }
    }
    SelfTestResult::pass(NAME, "8 states, Z and X expansions exact")
}

fn toggle_algebra() -> SelfTestResult {
    const NAME: &str = "toggle-algebra";
    let mut checked = 0u32;
    for n in 2..=4usize {
        let ls = labels(n);
        for q in 0..n {
            for op in PauliOp::ALL {
                let delta = pauli_delta(op, q, n).expect("in range");
                for start in GhzIndex::all(n) {
                    let mut state = ghz_state(start, &ls).expect("labels fit");
                    state.apply_pauli(ls[q], op).expect("label exists");
                    let expect = ghz_state(start.apply(&delta), &ls).expect("labels fit");
                    let overlap = inner_product(&expect, &state).expect("same labels");
                    if (overlap.norm() - 1.0).abs() > 1e-10 {
                        return SelfTestResult::fail(
                            NAME,
                            format!("n={n} q={q} {op} on {start}: overlap {overlap}"),
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    SelfTestResult::pass(NAME, format!("{checked} toggle cases match the state vector"))
}

fn decode_inversion() -> SelfTestResult {
    const NAME: &str = "decode-inversion";
    let mut checked = 0u32;
    for n in 3..=5usize {
        for alice_op in PauliOp::ALL {
            for rest in 0..(1u32 << (n - 1)) {
                let mut ops = vec![alice_op];
                for j in 0..n - 1 {
                    ops.push(if rest >> j & 1 == 1 {
                        PauliOp::IY
                    } else {
                        PauliOp::I
                    });
                }
                let delta = ops
                    .iter()
                    .enumerate()
                    .fold(IndexDelta::zero(n), |acc, (q, &op)| {
                        acc.compose(&pauli_delta(op, q, n).expect("in range"))
                    });
                for viewer in 0..n {
                    match solve_group(n as u8, PartyId(viewer as u8), ops[viewer], &delta) {
                        Some(got) if got == ops => checked += 1,
                        other => {
                            return SelfTestResult::fail(
                                NAME,
                                format!("n={n} viewer={viewer} ops={ops:?}: got {other:?}"),
                            )
                        }
                    }
                }
            }
        }
    }
    SelfTestResult::pass(NAME, format!("{checked} viewpoint decodings invert exactly"))
}

fn session_round_trip() -> SelfTestResult {
    const NAME: &str = "session-round-trip";
    for (n, groups, check, trials) in [(3u8, 10u32, 4u32, 25u64), (4, 8, 3, 10)] {
        for t in 0..trials {
            let config = SessionConfig::new(n, groups, check, 1000 + t);
            let mut rng = stream(config.seed, "selftest-plan", t);
            let plan = MessagePlan::random(n, config.message_group_count(), &mut rng);
            let result = match run_session(&config, &plan, &AdversarySpec::None) {
                Ok(r) => r,
                Err(e) => return SelfTestResult::fail(NAME, format!("session error: {e}")),
            };
            if result.status != SessionStatus::Completed {
                return SelfTestResult::fail(NAME, format!("n={n} trial {t}: {:?}", result.status));
            }
            if !result.decoded_exactly(&plan) {
                return SelfTestResult::fail(NAME, format!("n={n} trial {t}: decode mismatch"));
            }
        }
    }
    SelfTestResult::pass(NAME, "35 attack-free sessions decoded exactly")
}

fn attack_error_rates() -> SelfTestResult {
    const NAME: &str = "attack-error-rates";
    // Forced |psi_000> groups, checks over nearly all groups.
    let mut session = SessionConfig::new(3, 26, 25, 4242);
    session.forced_initial = Some(GhzIndex::from_paper_label("000").expect("label"));
    let run = |fakes: &[(u8, FakePrep)]| {
        let spec = ExperimentSpec::new(
            session.clone(),
            AdversarySpec::InterceptResend(InterceptResendConfig::new(fakes)),
            60,
        );
        let outcome = run_experiment(&spec).expect("experiment runs");
        let rate = |name: &str| {
            outcome
                .stats
                .iter()
                .find(|r| r.metric == name)
                .expect("metric present")
                .estimate
        };
        (rate("check-error-rate-z"), rate("check-error-rate-x"))
    };
    let (z01, x01) = run(&[(1, FakePrep::Zero), (2, FakePrep::One)]);
    if z01 != 1.0 {
        return SelfTestResult::fail(NAME, format!("fakes (0,1): Z rate {z01}, want exactly 1"));
    }
    if (x01 - 0.5).abs() > 0.06 {
        return SelfTestResult::fail(NAME, format!("fakes (0,1): X rate {x01}, want 0.5"));
    }
    let (z00, x00) = run(&[(1, FakePrep::Zero), (2, FakePrep::Zero)]);
    if (z00 - 0.5).abs() > 0.06 || (x00 - 0.5).abs() > 0.06 {
        return SelfTestResult::fail(NAME, format!("fakes (0,0): rates ({z00}, {x00}), want 0.5"));
    }
    SelfTestResult::pass(
        NAME,
        format!("rates Z={z01:.3}/X={x01:.3} and Z={z00:.3}/X={x00:.3}"),
    )
}

fn experiment_determinism() -> SelfTestResult {
    const NAME: &str = "experiment-determinism";
    let spec = ExperimentSpec::new(SessionConfig::new(3, 8, 3, 77), AdversarySpec::None, 10);
    let a = run_experiment(&spec).expect("experiment runs");
    let b = run_experiment(&spec).expect("experiment runs");
    let ja = serde_json::to_string(&a).expect("serializes");
    let jb = serde_json::to_string(&b).expect("serializes");
    if ja != jb {
        return SelfTestResult::fail(NAME, "identical specs produced different outcomes");
    }
    SelfTestResult::pass(NAME, "identical specs, identical outcomes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_selftest_check_passes() {
        for result in run_selftest() {
            assert!(result.passed, "{}: {}", result.name, result.detail);
        }
    }
}
