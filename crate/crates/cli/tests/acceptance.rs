//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use trace_kit::verify::{run_suite, Settings, Suite};
use trace_kit_core::Exec;

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [(Suite, usize)],
    limit: Duration,
}

const SEED: u64 = 42;
const BOUND: usize = 8;

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, title: "circle family", suites: &[(Suite::Circle, 1)], limit: Duration::from_secs(1) },
    Criterion {
        id: 2,
        title: "two-route Lefschetz",
        suites: &[(Suite::Lefschetz, 500)],
        limit: Duration::from_secs(10),
    },
    Criterion {
        id: 3,
        title: "Reidemeister augmentation",
        suites: &[(Suite::Reidemeister, 500)],
        limit: Duration::from_secs(20),
    },
    Criterion {
        id: 4,
        title: "Reidemeister projection equals transfer",
        suites: &[(Suite::Transfer, 500)],
        limit: Duration::from_secs(20),
    },
    Criterion {
        id: 5,
        title: "tree edge collapse invariance",
        suites: &[(Suite::Collapse, 200)],
        limit: Duration::from_secs(10),
    },
    Criterion { id: 6, title: "chain algebra", suites: &[(Suite::Chain, 200)], limit: Duration::from_secs(10) },
    Criterion {
        id: 7,
        title: "representation total trace",
        suites: &[(Suite::Gpdrep, 200)],
        limit: Duration::from_secs(10),
    },
    Criterion {
        id: 8,
        title: "matrix model and shadows",
        suites: &[(Suite::Matrix, 300), (Suite::Shadow, 300)],
        limit: Duration::from_secs(10),
    },
    Criterion {
        id: 9,
        title: "Hattori-Stallings traces",
        suites: &[(Suite::HattoriStallings, 100)],
        limit: Duration::from_secs(5),
    },
    Criterion {
        id: 10,
        title: "set transfer, exhaustive",
        suites: &[(Suite::SetTransfer, 1)],
        limit: Duration::from_secs(2),
    },
];

fn main() -> ExitCode {
    // libtest-style flags (e.g. --nocapture) are accepted and ignored
    let exec = if std::env::var_os("TRACE_KIT_SEQUENTIAL").is_some() { Exec::Sequential } else { Exec::Parallel };
    let mut all = true;
    for c in &CRITERIA {
        let start = Instant::now();
        let mut checked = 0;
        let mut problems = Vec::new();
        for &(suite, instances) in c.suites {
            let r = run_suite(suite, &Settings { seed: SEED, instances, bound: BOUND, exec });
            checked += r.checked;
            if !r.pass() {
                let first = r.failures.first().map(|f| f.message.as_str()).unwrap_or("");
                problems.push(format!("{}: {} of {} failed ({first})", r.suite, r.failed, r.checked));
            }
        }
        let elapsed = start.elapsed();
        if elapsed > c.limit {
            problems.push(format!("took {:.2?}, limit {:.0?}", elapsed, c.limit));
        }
        let ok = problems.is_empty();
        all &= ok;
        println!(
            "criterion {:>2} {}: {} ({checked} checks, {:.2?}){}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed,
            if ok { String::new() } else { format!(" {}", problems.join("; ")) }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
