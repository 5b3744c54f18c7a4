//! The disturbance attack: Eve tampers with particles returning to Alice
//! without learning anything. A forced iY flips every affected bit and
//! the reveal check catches it; a Z measurement randomizes the phase so
//! some announcements stop decoding at Alice entirely. Either way Eve's
//! "recovered" bits are uniform guesses sitting at the 50% baseline.

use ghz_qsdc::{
    eve_information, run_session, AdversarySpec, DisturbanceConfig, DisturbanceMode, MessagePlan,
    SessionConfig, SessionStatus,
};

fn run_case(mode: DisturbanceMode, p: f64, trials: u64) {
    let mut aborted = 0u64;
    let mut eve_correct = 0u64;
    let mut eve_total = 0u64;
    let mut failed_decodes = 0u64;
    for t in 0..trials {
        let mut config = SessionConfig::new(3, 12, 2, 5000 + t);
        config.reveal_fraction = 1.0;
        let mut rng = ghz_qsdc::rng::stream(config.seed, "plan", 0);
        let plan = MessagePlan::random(3, config.message_group_count(), &mut rng);
        let spec = AdversarySpec::Disturbance(DisturbanceConfig::new(mode, p));
        let result = run_session(&config, &plan, &spec).expect("session runs");
        if result.status != SessionStatus::Completed {
            aborted += 1;
        }
        if let Some(alice) = result.decoded.first() {
            failed_decodes += alice.failed_groups() as u64;
        }
        if let Some(report) = &result.eve_report {
            let pooled = eve_information(report, &plan, &result.message_groups).pooled();
            eve_correct += pooled.correct;
            eve_total += pooled.total;
        }
    }
    println!(
        "mode {mode:?}, p={p}: {aborted}/{trials} aborted, \
         {failed_decodes} undecodable groups at Alice, \
         eve guesses {eve_correct}/{eve_total} right ({:.1}%)",
        100.0 * eve_correct as f64 / eve_total.max(1) as f64
    );
}

fn main() {
    run_case(DisturbanceMode::ApplyIy, 1.0, 200);
    run_case(DisturbanceMode::ApplyRandomOp, 1.0, 200);
    run_case(DisturbanceMode::ApplyRandomOp, 0.3, 200);
    run_case(DisturbanceMode::MeasureZ, 1.0, 200);
    println!("(with full reveal, any flip on a revealed position aborts the session)");
}
