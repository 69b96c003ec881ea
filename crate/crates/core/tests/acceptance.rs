//! Runs every acceptance criterion at its pinned size and prints one
//! pass/fail line per criterion, then repeats the whole selftest on a
//! different worker count and compares the reports byte for byte.
//!
//! Runs without the libtest harness so the lines are never captured.

use std::time::{Duration, Instant};

use anline::selftest::{
    criterion_determinism, criterion_division, criterion_exhaustive_division, criterion_gaga, criterion_huber,
    criterion_lattice, criterion_negative_control, criterion_pairing, criterion_seminorm, criterion_splitting,
    run_selftest, CriterionLine, SelftestConfig, SelftestReport,
};

type Criterion = fn(&SelftestConfig) -> CriterionLine;

/// Criterion, wall-clock budget in release-mode seconds (`None`: unpinned).
const CRITERIA: [(Criterion, Option<u64>); 9] = [
    (criterion_division, Some(60)),
    (criterion_exhaustive_division, None),
    (criterion_splitting, Some(10)),
    (criterion_pairing, None),
    (criterion_gaga, Some(120)),
    (criterion_negative_control, None),
    (criterion_seminorm, None),
    (criterion_lattice, None),
    (criterion_huber, None),
];

fn main() {
    let cfg = SelftestConfig::default();
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (run, budget) in CRITERIA {
        let t = Instant::now();
        let l = run(&cfg);
        let took = t.elapsed();
        let in_budget = budget.is_none_or(|b| took <= Duration::from_secs(b));
        println!(
            "ACCEPTANCE criterion={} name={} {} elapsed={:.2}s budget={}",
            l.id,
            l.name,
            if l.passed && in_budget { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.map_or("none".to_string(), |b| format!("{b}s"))
        );
        println!("    {l}");
        if !l.passed || !in_budget {
            failures.push(l.name);
        }
        lines.push(l);
    }
    let det = criterion_determinism(&cfg, &lines);
    let det_passed = det.passed;
    println!("    {det}");
    lines.push(det);
    let first = SelftestReport { lines }.to_string();

    // second full run on a different worker count
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let second = pool.install(|| run_selftest(&cfg)).to_string();
    let identical = first == second;
    println!(
        "ACCEPTANCE criterion=10 name=determinism {} bytes={} identical={identical}",
        if identical && det_passed { "PASS" } else { "FAIL" },
        first.len()
    );
    if !identical || !det_passed {
        failures.push("determinism");
    }
    if failures.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failures:?}\n{first}");
        std::process::exit(1);
    }
}
