//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines appear in order as each check finishes.

use std::process::ExitCode;

use bracketwords::verify::{run_check, CHECKS, DEFAULT_SEED};

/// Criteria whose statement is false for these inputs: `trace(i) = ⌊β^i⌉`
/// fails at small `i` (Tribonacci `i = 3`: trace 7, `⌊β³⌉ = 6`). The check
/// runs as stated and must keep failing; any other failure fails the target.
const EXPECTED_FAILURES: &[u32] = &[8];

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for c in CHECKS {
        let r = run_check(c, DEFAULT_SEED);
        println!("{}", r.line());
        if !r.pass {
            failed.push(r.id);
        }
    }
    println!("{} passed, {} failed {:?}", CHECKS.len() - failed.len(), failed.len(), failed);
    if failed == EXPECTED_FAILURES {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome: expected failures {EXPECTED_FAILURES:?}");
        ExitCode::FAILURE
    }
}
