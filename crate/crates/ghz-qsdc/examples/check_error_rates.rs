//! Reproduce the per-basis check error rates of the intercept-and-resend
//! attack on |psi_000> groups.
//!
//! With fakes |0>,|1>: a Z-basis check reads (a, B, C) = (random, 0, 1),
//! never the required 000/111 — error rate exactly 1 — while an X-basis
//! check fails half the time. With fakes |0>,|0>: both bases fail half
//! the time.

use ghz_qsdc::harness::{run_experiment, ExperimentSpec};
use ghz_qsdc::{AdversarySpec, FakePrep, InterceptResendConfig, SessionConfig};

fn rates(fakes: &[(u8, FakePrep)], seed: u64) -> (f64, f64, u64, u64) {
    let mut session = SessionConfig::new(3, 51, 50, seed);
    session.forced_initial = Some("000".parse().expect("valid label"));
    let spec = ExperimentSpec::new(
        session,
        AdversarySpec::InterceptResend(InterceptResendConfig::new(fakes)),
        200,
    );
    let outcome = run_experiment(&spec).expect("experiment runs");
    let find = |name: &str| {
        let r = outcome
            .stats
            .iter()
            .find(|r| r.metric == name)
            .expect("metric present");
        (r.estimate, r.trials)
    };
    let (z, nz) = find("check-error-rate-z");
    let (x, nx) = find("check-error-rate-x");
    (z, x, nz, nx)
}

fn main() {
    let (z, x, nz, nx) = rates(&[(1, FakePrep::Zero), (2, FakePrep::One)], 101);
    println!("fakes |0>,|1>: Z error rate {z:.4} over {nz} groups, X error rate {x:.4} over {nx} groups");
    let (z, x, nz, nx) = rates(&[(1, FakePrep::Zero), (2, FakePrep::Zero)], 102);
    println!("fakes |0>,|0>: Z error rate {z:.4} over {nz} groups, X error rate {x:.4} over {nx} groups");
    let (z, x, nz, nx) = rates(&[(1, FakePrep::One), (2, FakePrep::One)], 103);
    println!("fakes |1>,|1>: Z error rate {z:.4} over {nz} groups, X error rate {x:.4} over {nx} groups");
}
