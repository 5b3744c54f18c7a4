//! How many check groups are "sufficiently many"? Sweep the check-subset
//! size M under a full intercept-and-resend attack and tabulate the abort
//! probability; each check group fails with probability at least one
//! half, so detection approaches 1 - 2^-M.

use ghz_qsdc::harness::{detection_curve, ExperimentSpec, SweepParameter};
use ghz_qsdc::{AdversarySpec, FakePrep, InterceptResendConfig, Metric, SessionConfig};

fn main() {
    let mut spec = ExperimentSpec::new(
        SessionConfig::new(3, 12, 1, 77),
        AdversarySpec::InterceptResend(InterceptResendConfig::all_parties(3, FakePrep::Random)),
        400,
    );
    spec.metrics = vec![Metric::DetectionProbability];

    let values = [1.0, 2.0, 4.0, 8.0];
    let rows = detection_curve(&spec, SweepParameter::CheckCount, &values)
        .expect("sweep runs");

    println!("{:>3}  {:>10}  {:>10}", "M", "detected", "1-2^-M");
    for row in &rows {
        let detection = &row.records[0];
        println!(
            "{:>3}  {:>10.4}  {:>10.4}",
            row.value,
            detection.estimate,
            1.0 - 0.5f64.powf(row.value)
        );
    }
}
