//! Thin command-line front end over the library: run one session, batch
//! experiments, parameter sweeps, and the invariant self-test.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ghz_qsdc::harness::{
    detection_curve, load_spec, resolve_config_path, run_experiment, run_selftest,
    write_stats_csv, write_sweep_csv, write_trials_jsonl, ExperimentSpec, StatsRecord,
    SweepParameter, SweepRow,
};
use ghz_qsdc::{
    run_session, AdversarySpec, GhzIndex, MessagePlan, PartyId, SessionConfig, SessionResult,
    SessionStatus,
};

#[derive(Parser)]
#[command(
    name = "qsdc",
    about = "Simultaneous quantum secure direct communication over GHZ states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one session and print announcements and decoded messages.
    Run(RunArgs),
    /// Run a seeded Monte Carlo experiment and aggregate metrics.
    Stats(StatsArgs),
    /// Re-run an experiment across a list of parameter values.
    Sweep(SweepArgs),
    /// Run the built-in invariant suite.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (TOML); session and adversary sections are
    /// used. Falls back to $QSDC_CONFIG_DIR/default.toml, then to built-in
    /// defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    parties: Option<u8>,
    #[arg(long)]
    groups: Option<u32>,
    /// Check-subset size M (default: half the groups).
    #[arg(long = "check-count")]
    check_count: Option<u32>,
    /// Force every group to this initial GHZ label, e.g. 000.
    #[arg(long)]
    initial: Option<String>,
    /// Alice's message bits (two per message group), e.g. 01.
    #[arg(long)]
    alice: Option<String>,
    /// Comma-separated bit strings for the other parties, e.g. 0,1.
    #[arg(long)]
    others: Option<String>,
    /// Write the transcript as JSON lines to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit nonzero when the session aborts because of a detected attack.
    #[arg(long)]
    fail_on_abort: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Experiment config file (TOML); defaults to
    /// $QSDC_CONFIG_DIR/default.toml.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count override.
    #[arg(long)]
    trials: Option<u64>,
    /// Output directory for trials.jsonl and stats.csv (overrides the
    /// config's output section).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter to sweep: M, p, rho, or trials.
    #[arg(long)]
    param: String,
    /// Comma-separated values, e.g. 1,2,4,8.
    #[arg(long)]
    values: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Output directory for sweep.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Load a spec if a config file is given or discoverable; built-in
/// defaults otherwise.
fn spec_or_default(config: Option<&PathBuf>) -> Result<ExperimentSpec, Box<dyn Error>> {
    match resolve_config_path(config.map(|p| p.as_path())) {
        Ok(path) => Ok(load_spec(&path)?),
        Err(e) if config.is_some() => Err(e.into()),
        Err(_) => Ok(ExperimentSpec::new(
            SessionConfig::new(3, 40, 20, 0),
            AdversarySpec::None,
            1,
        )),
    }
}

fn parse_bits(s: &str) -> Result<Vec<u8>, Box<dyn Error>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(format!("invalid bit {other:?} in {s:?}").into()),
        })
        .collect()
}

fn bits_string(bits: &[Option<u8>]) -> String {
    bits.iter()
        .map(|b| match b {
            Some(0) => '0',
            Some(_) => '1',
            None => '?',
        })
        .collect()
}

fn dibits_string(dibits: &[Option<[u8; 2]>]) -> String {
    dibits
        .iter()
        .map(|d| match d {
            Some([a, b]) => format!("{a}{b}"),
            None => "??".to_string(),
        })
        .collect()
}

fn print_decoded(result: &SessionResult, parties: u8) {
    for view in &result.decoded {
        let mut parts = Vec::new();
        for j in 0..parties {
            if j == view.viewer.0 {
                continue;
            }
            if j == 0 {
                parts.push(format!("Alice={}", dibits_string(&view.alice_dibits())));
            } else {
                parts.push(format!(
                    "{}={}",
                    PartyId(j).name(),
                    bits_string(&view.party_bits(usize::from(j)))
                ));
            }
        }
        println!("{} reads: {}", view.viewer.name(), parts.join(" "));
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Box<dyn Error>> {
    let spec = spec_or_default(args.config.as_ref())?;
    let mut session = spec.session.clone();
    if let Some(seed) = args.seed {
        session.seed = seed;
    }
    if let Some(parties) = args.parties {
        session.parties = parties;
    }
    if let Some(groups) = args.groups {
        session.groups = groups;
        session.check_count = groups / 2;
    }
    if let Some(m) = args.check_count {
        session.check_count = m;
    }
    if let Some(label) = &args.initial {
        session.forced_initial = Some(label.parse::<GhzIndex>()?);
    }

    let k = session.message_group_count();
    let plan = if args.alice.is_some() || args.others.is_some() {
        let alice = parse_bits(args.alice.as_deref().unwrap_or_default())?;
        let others: Vec<Vec<u8>> = match args.others.as_deref() {
            Some(s) => s.split(',').map(parse_bits).collect::<Result<_, _>>()?,
            None => vec![vec![0; k as usize]; usize::from(session.parties) - 1],
        };
        MessagePlan::from_bits(&alice, &others)?
    } else {
        let mut rng = ghz_qsdc::rng::stream(session.seed, "plan", 0);
        MessagePlan::random(session.parties, k, &mut rng)
    };

    let result = run_session(&session, &plan, &spec.adversary)?;

    println!(
        "session: {} parties, {} groups, {} check groups, seed {}",
        session.parties, session.groups, session.check_count, session.seed
    );
    for event in result.transcript.events() {
        if let ghz_qsdc::TranscriptEvent::Announcement {
            group,
            initial,
            measured,
        } = event
        {
            println!("group {group}: initial {initial} measured {measured}");
        }
    }
    let status = match result.status {
        SessionStatus::Completed => "completed",
        SessionStatus::AbortedCheck => "aborted: eavesdropping check failed",
        SessionStatus::AbortedReveal => "aborted: reveal check failed",
    };
    println!(
        "status: {status} (check error rate {:.3})",
        result.check_error_rate
    );
    print_decoded(&result, session.parties);
    if let Some(report) = &result.eve_report {
        println!(
            "eve: {} bits intercepted, {} dibits derived, {} channel actions",
            report.party_bits.len(),
            report.alice_dibits.len(),
            report.actions.len()
        );
    }
    if let Some(path) = &args.out {
        std::fs::write(path, result.transcript.to_jsonl())?;
        println!("transcript: {}", path.display());
    }
    if args.fail_on_abort && result.status != SessionStatus::Completed {
        eprintln!("abort: {status}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_stats_table(records: &[StatsRecord]) {
    println!(
        "{:<24} {:>12} {:>12} {:>10}  {:<16} {}",
        "metric", "estimate", "std_error", "samples", "digest", "seed"
    );
    for r in records {
        println!(
            "{:<24} {:>12.6} {:>12.6} {:>10}  {:<16} {}",
            r.metric, r.estimate, r.std_error, r.trials, r.config_digest, r.seed
        );
    }
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode, Box<dyn Error>> {
    let mut spec = spec_or_default(args.config.as_ref())?;
    if let Some(seed) = args.seed {
        spec.session.seed = seed;
    }
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    let outcome = run_experiment(&spec)?;
    print_stats_table(&outcome.stats);
    let out_dir = args.out.or(spec.output.map(|o| o.dir));
    if let Some(dir) = out_dir {
        write_trials_jsonl(&dir.join("trials.jsonl"), &outcome)?;
        write_stats_csv(&dir.join("stats.csv"), &outcome.stats)?;
        println!("wrote: {}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_sweep_table(rows: &[SweepRow]) {
    println!(
        "{:<6} {:>10}  {:<24} {:>12} {:>12} {:>10}",
        "param", "value", "metric", "estimate", "std_error", "samples"
    );
    for row in rows {
        for r in &row.records {
            println!(
                "{:<6} {:>10}  {:<24} {:>12.6} {:>12.6} {:>10}",
                row.parameter, row.value, r.metric, r.estimate, r.std_error, r.trials
            );
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Box<dyn Error>> {
    let mut spec = spec_or_default(args.config.as_ref())?;
    if let Some(seed) = args.seed {
        spec.session.seed = seed;
    }
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    let param: SweepParameter = args.param.parse()?;
    let values: Vec<f64> = args
        .values
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| format!("invalid --values: {e}"))?;
    let rows = detection_curve(&spec, param, &values)?;
    print_sweep_table(&rows);
    let out_dir = args.out.or(spec.output.map(|o| o.dir));
    if let Some(dir) = out_dir {
        write_sweep_csv(&dir.join("sweep.csv"), &rows)?;
        println!("wrote: {}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest() -> Result<ExitCode, Box<dyn Error>> {
    let mut failed = false;
    for result in run_selftest() {
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:<24} {}", result.name, result.detail);
        failed |= !result.passed;
    }
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
