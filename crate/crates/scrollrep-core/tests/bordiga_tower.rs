//! Full pipeline runs for the degree six scroll, against the frozen
//! numbers of its table row.

use scrollrep_core::field::PrimeField;
use scrollrep_core::report::{Progress, Report, Status};
use scrollrep_core::rng::Rng;
use scrollrep_core::scrolls::bordiga::{build, BordigaMode};
use scrollrep_core::scrolls::tower;

struct StderrTiming(std::time::Instant);

impl Progress for StderrTiming {
    fn checkpoint(&mut self, label: &str) {
        eprintln!("[{:8.1}s] {label}", self.0.elapsed().as_secs_f64());
    }
}

fn print_report(report: &Report) {
    for item in &report.items {
        eprintln!("  [{}] {} :: {}", item.status.as_str(), item.name, item.detail);
    }
}

fn run_mode(mode: BordigaMode, seed: u64, rng_seed: u64) -> tower::TowerOutcome {
    let fp = PrimeField::new(32003).unwrap();
    let input = build(&fp, seed, mode).unwrap();
    let mut rng = Rng::new(rng_seed);
    let mut progress = StderrTiming(std::time::Instant::now());
    let out = tower::run(&input, &mut rng, &mut progress).unwrap();
    print_report(&out.report);
    out
}

#[test]
fn standard_row_verifies() {
    let out = run_mode(BordigaMode::Standard, 1, 101);
    let failed: Vec<String> = out
        .report
        .items
        .iter()
        .filter(|i| i.status == Status::Fail)
        .map(|i| format!("{}: {}", i.name, i.detail))
        .collect();
    assert!(failed.is_empty(), "failed items:\n{}", failed.join("\n"));
}

#[test]
fn chord_row_verifies() {
    let out = run_mode(BordigaMode::Chord, 1, 103);
    let failed: Vec<String> = out
        .report
        .items
        .iter()
        .filter(|i| i.status == Status::Fail)
        .map(|i| format!("{}: {}", i.name, i.detail))
        .collect();
    assert!(failed.is_empty(), "failed items:\n{}", failed.join("\n"));
}
