//! Acceptance suites: seeded, budgeted property checks against exact or
//! sampled oracles. Each suite yields a list of named checks.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

mod algebra;
mod calculus;
mod structure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub topic: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "suite {} (seed {}): {status}  [{}]",
            self.suite, self.seed, self.topic
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        out
    }
}

type Runner = fn(&mut ChaCha8Rng, u64, Option<usize>) -> Vec<Check>;

/// `(name, topic, runner)` in criterion order.
const SUITES: [(&str, &str, Runner); 14] = [
    (
        "bekic",
        "elimination agrees with joint iteration",
        algebra::bekic,
    ),
    (
        "sigma1",
        "sigma1 least fixed points are reached by iteration",
        algebra::sigma1,
    ),
    ("guard", "guarding preserves meaning", algebra::guard),
    (
        "powerset",
        "subset translation of simple systems",
        algebra::powerset,
    ),
    ("arrow", "conjunction of arrow terms", algebra::arrow),
    ("star", "the Kleene star is constructive", algebra::star),
    (
        "covers",
        "cover calculus is sound and complete",
        calculus::covers,
    ),
    (
        "mucovers",
        "covers of least fixed points via pans",
        calculus::mucovers,
    ),
    ("spcon", "covers of special conjunctions", calculus::spcon),
    (
        "whitman",
        "product with the two-element algebra",
        structure::whitman,
    ),
    (
        "harness",
        "regular maps have the same upper bounds",
        structure::harness,
    ),
    (
        "counterexample",
        "the reduced power has no complete extension",
        structure::counterexample,
    ),
    (
        "completion",
        "MacNeille completion and adjoint extension",
        structure::completion,
    ),
    (
        "compile",
        "sigma1 terms compile to elementary systems",
        algebra::compile,
    ),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs one suite. `budget` overrides the main sample count (for
/// `counterexample`, the largest index certified).
pub fn run_suite(
    name: &str,
    seed: u64,
    budget: Option<usize>,
) -> Result<SuiteReport, UnknownSuite> {
    let (suite, topic, runner) = SUITES
        .iter()
        .find(|s| s.0 == name)
        .ok_or_else(|| UnknownSuite(name.into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = runner(&mut rng, seed, budget);
    Ok(SuiteReport {
        suite: suite.to_string(),
        topic: topic.to_string(),
        seed,
        checks,
    })
}

/// Tallies a family of cases into one check, keeping the first failure.
pub(crate) struct Tally {
    name: String,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    pub(crate) fn new(name: &str) -> Tally {
        Tally {
            name: name.into(),
            cases: 0,
            failure: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    /// Records an engine result, counting errors as failures.
    pub(crate) fn result<E: std::fmt::Display>(
        &mut self,
        r: Result<bool, E>,
        what: impl FnOnce() -> String,
    ) {
        match r {
            Ok(ok) => self.record(ok, what),
            Err(e) => self.record(false, || format!("{}: error {e}", what())),
        }
    }

    pub(crate) fn cases(&self) -> usize {
        self.cases
    }

    pub(crate) fn finish(self, unit: &str) -> Check {
        match self.failure {
            None => Check::new(self.name, self.cases > 0, format!("{} {unit}", self.cases)),
            Some(f) => Check::new(
                self.name,
                false,
                format!("{} {unit}, first failure: {f}", self.cases),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert_eq!(
            run_suite("nonexistent", 0, None),
            Err(UnknownSuite("nonexistent".into()))
        );
    }

    #[test]
    fn small_budgets_pass() {
        for name in suite_names() {
            let r = run_suite(name, 7, Some(3)).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("bekic", 42, Some(20)).unwrap().render();
        let b = run_suite("bekic", 42, Some(20)).unwrap().render();
        assert_eq!(a, b);
    }
}
