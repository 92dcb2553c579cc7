//! Small harness for the acceptance suite: each criterion is a named check
//! that returns a verdict and a one-line detail string.

use std::fmt::Display;
use std::time::{Duration, Instant};

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

pub struct Criterion<E> {
    pub name: &'static str,
    pub check: fn() -> Result<Verdict, E>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub index: usize,
    pub name: &'static str,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.verdict.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} {tag} {} [{:.2}s] {}",
            self.index,
            self.name,
            self.elapsed.as_secs_f64(),
            self.verdict.detail
        )
    }
}

/// Run every criterion in order, printing a line as each finishes. An error
/// counts as a failure.
pub fn run_all<E: Display>(criteria: &[Criterion<E>]) -> Vec<Report> {
    criteria
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let start = Instant::now();
            let verdict = (c.check)().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
            let report = Report { index: i + 1, name: c.name, verdict, elapsed: start.elapsed() };
            println!("{report}");
            report
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok() -> Result<Verdict, String> {
        Ok(Verdict::new(true, "fine"))
    }

    fn broken() -> Result<Verdict, String> {
        Err("boom".into())
    }

    #[test]
    fn errors_are_failures() {
        let r = run_all(&[Criterion { name: "a", check: ok }, Criterion { name: "b", check: broken }]);
        assert!(r[0].verdict.passed);
        assert!(!r[1].verdict.passed);
        assert_eq!(r[1].index, 2);
        assert!(r[1].to_string().starts_with("criterion 2 FAIL b"));
        assert!(r[1].to_string().ends_with("error: boom"));
    }
}
