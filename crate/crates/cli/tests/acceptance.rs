//! Runs every acceptance criterion at full size and prints one line each.
//!
//! Criterion 9 fails: the transported tensor comparison does not hold for
//! general modules over the monoid squares. Only that check may fail there.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use polycoef::exactalg::Integer;
use polycoef_cli::suite::{run_suite, Suite, SuiteConfig, SuiteReport};

const SEED: u64 = 2024;

struct Criterion {
    number: usize,
    title: &'static str,
    suite: Suite,
    samples: usize,
    max_n: usize,
    limit: Option<Duration>,
}

const fn criterion(
    number: usize,
    title: &'static str,
    suite: Suite,
    samples: usize,
    max_n: usize,
    limit_s: Option<u64>,
) -> Criterion {
    Criterion {
        number,
        title,
        suite,
        samples,
        max_n,
        limit: match limit_s {
            Some(s) => Some(Duration::from_secs(s)),
            None => None,
        },
    }
}

const CRITERIA: [Criterion; 12] = [
    criterion(
        1,
        "T_h heights for h in {2, 3}",
        Suite::ThHeights,
        0,
        3,
        Some(60),
    ),
    criterion(
        2,
        "cross-effect flavors agree, 100 cube functors, n <= 4",
        Suite::CrossEffects,
        100,
        4,
        Some(60),
    ),
    criterion(
        3,
        "subobject forms agree on partial injections <= 5",
        Suite::Subobjects,
        10,
        5,
        None,
    ),
    criterion(
        4,
        "degree chain, collapse and chain witness",
        Suite::Degrees,
        24,
        4,
        None,
    ),
    criterion(
        5,
        "single and iterated shifts, 30 functors on partial injections <= 6",
        Suite::MultiStabiliser,
        30,
        6,
        None,
    ),
    criterion(
        6,
        "height comparison and conjugators",
        Suite::HeightComparison,
        12,
        4,
        None,
    ),
    criterion(
        7,
        "height of the restriction to injections, 30 functors",
        Suite::FiRestriction,
        30,
        5,
        None,
    ),
    criterion(
        8,
        "braidings and degree monotonicity",
        Suite::Braiding,
        12,
        4,
        None,
    ),
    criterion(
        9,
        "induction, condition (*) and 20 transported modules",
        Suite::Induction,
        20,
        4,
        None,
    ),
    criterion(
        10,
        "decomposition of T(s(n)), 20 functors, n <= 4",
        Suite::Decomposition,
        20,
        4,
        None,
    ),
    criterion(
        11,
        "cokernel cross-effects of T_2 nonzero at levels 1..5",
        Suite::CrbarDegeneracy,
        0,
        5,
        None,
    ),
    criterion(
        12,
        "Taylor stages on pointed sets <= 4, 10 functors",
        Suite::Taylor,
        10,
        4,
        Some(120),
    ),
];

/// Criteria expected to fail, with the only check allowed to fail in each.
const KNOWN_FAILURES: [(usize, &str); 1] = [(9, "transported tensor")];

fn summary(r: &SuiteReport) -> String {
    let mut checks: Vec<&str> = r.failures.iter().map(|f| f.check.as_str()).collect();
    checks.dedup();
    format!(
        "{} of {} cases failed [{}]",
        r.failures.len(),
        r.cases,
        checks.join(", ")
    )
}

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for c in &CRITERIA {
        let started = Instant::now();
        let config = SuiteConfig {
            samples: c.samples,
            max_n: c.max_n,
            seed: SEED,
        };
        let report = match run_suite::<Integer>(c.suite, config) {
            Ok(r) => r,
            Err(e) => {
                println!("criterion {:>2}: FAIL  {}: {e}", c.number, c.title);
                unexpected.push(c.number);
                continue;
            }
        };
        let elapsed = started.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let passed = report.passed && in_time;
        let status = if passed { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2}: {status}  {} ({} cases, {:.1} s)",
            c.number,
            c.title,
            report.cases,
            elapsed.as_secs_f64()
        );
        if !report.passed {
            line.push_str(&format!("; {}", summary(&report)));
        }
        if !in_time {
            line.push_str(&format!(
                "; over the {} s limit",
                c.limit.unwrap().as_secs()
            ));
        }
        println!("{line}");
        if !passed {
            let tolerated = KNOWN_FAILURES.iter().any(|&(n, check)| {
                n == c.number && in_time && report.failures.iter().all(|f| f.check == check)
            });
            if tolerated {
                for f in &report.failures {
                    println!("    case {}: {}", f.case, f.detail);
                }
            } else {
                for f in report.failures.iter().take(3) {
                    println!("    case {} [{}]: {}", f.case, f.check, f.detail);
                }
                unexpected.push(c.number);
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every failure is a known failure");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
