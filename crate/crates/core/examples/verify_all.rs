//! Run the full verification roster and print one line per suite.
//!
//!     cargo run --release --example verify_all -- [trials] [seed]

use ncentropy::harness::run_all;
use ncentropy::linalg::Seed;

fn main() {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);
    let start = std::time::Instant::now();
    let report = run_all(trials, Seed::new(seed), 1e-9);
    for s in &report.suites {
        println!("{:<24} {}  max residual {:.2e}  failures {}", s.suite, if s.pass { "pass" } else { "FAIL" }, s.max_residual, s.failures.len());
    }
    println!("{} in {:.2?}", if report.pass { "all suites pass" } else { "some suites failed" }, start.elapsed());
    std::process::exit(if report.pass { 0 } else { 1 });
}
