//! A full three-party session: 40 groups, half sacrificed to the
//! eavesdropping check, random messages, no adversary.

use ghz_qsdc::{run_session, AdversarySpec, MessagePlan, SessionConfig};

fn main() {
    let config = SessionConfig::new(3, 40, 20, 2024);
    let mut rng = ghz_qsdc::rng::stream(config.seed, "plan", 0);
    let plan = MessagePlan::random(config.parties, config.message_group_count(), &mut rng);

    let result = run_session(&config, &plan, &AdversarySpec::None).expect("session runs");

    println!("status: {:?}", result.status);
    println!("check error rate: {:.3}", result.check_error_rate);
    println!(
        "check groups: {:?}",
        result.transcript.check_groups()
    );
    println!("message groups: {:?}", result.message_groups);

    let alice = &result.decoded[0];
    let bob_bits: String = alice
        .party_bits(1)
        .iter()
        .map(|b| char::from(b'0' + b.unwrap()))
        .collect();
    let true_bits: String = plan.others[0].iter().map(|&b| char::from(b'0' + b)).collect();
    println!("Bob's message as Alice decodes it: {bob_bits}");
    println!("Bob's message as Bob sent it:      {true_bits}");
    assert!(result.decoded_exactly(&plan));
    println!("every viewpoint decoded every message exactly");
}
