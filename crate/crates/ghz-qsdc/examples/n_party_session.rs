//! The n-party generalization: five parties share one session built on
//! five-particle GHZ groups. Alice still encodes two bits per group; the
//! four others encode one each, and everyone reads everyone.

use ghz_qsdc::{run_session, AdversarySpec, MessagePlan, PartyId, SessionConfig};

fn main() {
    let config = SessionConfig::new(5, 60, 30, 7);
    let mut rng = ghz_qsdc::rng::stream(config.seed, "plan", 0);
    let plan = MessagePlan::random(config.parties, config.message_group_count(), &mut rng);

    let result = run_session(&config, &plan, &AdversarySpec::None).expect("session runs");
    println!(
        "status: {:?} ({} parties, {} message groups)",
        result.status,
        config.parties,
        result.message_groups.len()
    );

    // Party 3's view of everyone else, first six bits only.
    let view = &result.decoded[3];
    let of = |j: usize| -> String {
        view.party_bits(j)
            .iter()
            .take(6)
            .map(|b| char::from(b'0' + b.unwrap()))
            .collect()
    };
    println!("{} decodes (first six bits each):", view.viewer.name());
    let alice: String = view
        .alice_dibits()
        .iter()
        .take(3)
        .map(|d| {
            let d = d.unwrap();
            format!("{}{}", d[0], d[1])
        })
        .collect();
    println!("  Alice:   {alice}");
    for j in [1usize, 2, 4] {
        println!("  {:<8} {}", format!("{}:", PartyId(j as u8).name()), of(j));
    }
    assert!(result.decoded_exactly(&plan));
    println!("all {} viewpoints decoded exactly", config.parties);
}
