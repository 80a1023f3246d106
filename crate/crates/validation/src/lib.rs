//! Reporting for the acceptance suite: one `PASS`/`FAIL` line per criterion.

use std::process::ExitCode;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

pub fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

pub type Criterion = (&'static str, fn() -> Outcome);

pub fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

pub fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Runs every criterion in order, prints its line and a summary, and fails when any fails.
pub fn run_criteria(criteria: &[Criterion]) -> ExitCode {
    let total = criteria.len();
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {total} criteria pass");
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {} of {total} criteria fail: {failed:?}",
            failed.len()
        );
        ExitCode::FAILURE
    }
}
