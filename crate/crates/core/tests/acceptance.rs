//! The fourteen acceptance criteria, one suite each, at default budgets.
//! Runs without the libtest harness so that the per-criterion lines always
//! reach the output; exits non-zero if any criterion fails.

use std::process::ExitCode;

use mualg::suites::{run_suite, suite_names};

const SEED: u64 = 42;

fn main() -> ExitCode {
    let names = suite_names();
    assert_eq!(names.len(), 14, "one suite per criterion");
    println!(
        "\nrunning {} acceptance criteria (seed {SEED})",
        names.len()
    );
    let mut failed = Vec::new();
    for (i, name) in names.into_iter().enumerate() {
        let report = run_suite(name, SEED, None).expect("known suite");
        let again = run_suite(name, SEED, None).expect("known suite");
        let reproducible = report == again;
        let passed = report.passed() && reproducible;
        println!(
            "criterion {:>2} {name:<15} {}  {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            report.topic
        );
        if !passed {
            print!("{}", report.render());
            if !reproducible {
                println!("  report differs between two runs with the same seed");
            }
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass\n");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}\n");
        ExitCode::FAILURE
    }
}
