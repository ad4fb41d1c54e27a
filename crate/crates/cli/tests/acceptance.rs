//! Acceptance gate: one PASS/FAIL line per criterion, with pinned time
//! bounds. Exits nonzero if any criterion fails or runs over time.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use esakia_core::abomination::abomination_truncation;
use esakia_core::verify::{self, CriterionResult};

const SEED: u64 = 42;

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn timed(limit: Duration, f: impl FnOnce() -> CriterionResult) -> Line {
    let start = Instant::now();
    let r = f();
    Line {
        id: r.id,
        name: r.name,
        passed: r.passed(),
        detail: r.detail,
        elapsed: start.elapsed(),
        limit,
    }
}

/// Each width instance separately under its own bound, then the criterion.
fn width() -> Line {
    let start = Instant::now();
    let mut slow = Vec::new();
    for (n, m) in [(2, 1), (2, 2), (3, 1)] {
        let t = Instant::now();
        let w = abomination_truncation(n, m)
            .unwrap()
            .poset
            .max_antichain_size();
        assert_eq!(w, 1 << (n + 2));
        if t.elapsed() > secs(10) {
            slow.push(format!("(n={n},M={m}) took {:?}", t.elapsed()));
        }
    }
    let r = verify::width_criterion();
    Line {
        id: 1,
        name: r.name,
        passed: r.passed() && slow.is_empty(),
        detail: if slow.is_empty() {
            r.detail
        } else {
            slow.join("; ")
        },
        elapsed: start.elapsed(),
        limit: secs(60),
    }
}

fn determinism() -> Line {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_esakia-kit");
    let run = || {
        Command::new(bin)
            .args(["verify", "--suite", "paper", "--seed", &SEED.to_string()])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout;
    let ok = a.status.success() && b.status.success();
    Line {
        id: 10,
        name: "determinism",
        passed: same && ok && !a.stdout.is_empty(),
        detail: format!(
            "identical={same} exit={:?}/{:?} bytes={}",
            a.status.code(),
            b.status.code(),
            a.stdout.len()
        ),
        elapsed: start.elapsed(),
        limit: secs(600),
    }
}

fn main() -> ExitCode {
    let lines = vec![
        width(),
        timed(secs(5), verify::colorability_criterion),
        timed(secs(60), || verify::lemma_criterion(SEED)),
        timed(secs(120), || verify::corollary_criterion(SEED)),
        timed(secs(600), verify::coloring_theorem_criterion),
        timed(secs(300), verify::kc_criterion),
        timed(secs(300), || verify::oracle_criterion(SEED)),
        timed(secs(300), verify::duality_criterion),
        timed(secs(1), verify::bound_criterion),
        determinism(),
    ];
    let mut all = true;
    for l in &lines {
        let in_time = l.elapsed <= l.limit;
        let ok = l.passed && in_time;
        all &= ok;
        println!(
            "{} criterion {:>2} {:<18} {:>9.3}s (limit {}s)  {}{}",
            if ok { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            l.detail,
            if in_time { "" } else { "  [over time]" }
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        lines
            .iter()
            .filter(|l| l.passed && l.elapsed <= l.limit)
            .count(),
        lines.len()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
