//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use wittenlab::suites::{run, Bounds, Outcome, Suite};
use wittenlab_core::tolerances::CERTIFIED_PRECISION_BITS;

struct Verdict {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn suites(list: &[Suite], bounds: &Bounds) -> (Vec<Outcome>, Duration) {
    let start = Instant::now();
    let out = list.iter().map(|s| run(*s, bounds).expect("suite runs")).collect();
    (out, start.elapsed())
}

fn criterion(id: u32, title: &'static str, list: &[Suite], bounds: &Bounds, budget: Option<Duration>) -> Verdict {
    let (outcomes, elapsed) = suites(list, bounds);
    let checks: usize = outcomes.iter().map(|o| o.checks.len()).sum();
    let failures: usize = outcomes.iter().map(Outcome::failures).sum();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let mut detail = format!("{}/{checks} checks, {:.1} s", checks - failures, elapsed.as_secs_f64());
    if let Some(b) = budget {
        detail.push_str(&format!(" (budget {} s)", b.as_secs()));
    }
    if let Some(f) = outcomes.iter().find_map(|o| o.first_failure().map(|c| (o.suite.name(), c))) {
        detail.push_str(&format!("; first failure {}:{} {}", f.0, f.1.witness, f.1.detail));
    }
    Verdict { id, title, passed: failures == 0 && checks > 0 && in_time, detail }
}

fn main() {
    let defaults = Bounds::default();
    let certified = Bounds { precision_bits: Some(CERTIFIED_PRECISION_BITS), ..Bounds::default() };
    let secs = Duration::from_secs;
    let verdicts = [
        criterion(1, "psi correlators: closed forms, string and dilaton", &[Suite::Dvv], &defaults, Some(secs(60))),
        criterion(2, "star and sharp recursions agree", &[Suite::Sharp], &defaults, None),
        criterion(3, "Virasoro residuals vanish, K=7 D=6, n in [-1,4]", &[Suite::Virasoro], &defaults, Some(secs(120))),
        criterion(4, "Hurwitz numbers: brute force, characters, cut-and-join", &[Suite::Hurwitz], &defaults, None),
        criterion(5, "ELSV in genus zero and genus-one extraction", &[Suite::Elsv], &defaults, None),
        criterion(6, "cut-and-join through Hodge integrals, g<=1 |mu|<=4", &[Suite::Cutjoin], &defaults, None),
        criterion(7, "low coefficients of the Hurwitz/Hodge series vanish", &[Suite::Theorem1], &defaults, None),
        criterion(
            8,
            "asymptotic sums, Laplace and join integrals at 128 bits",
            &[Suite::Asymptotic, Suite::Laplace, Suite::JoinIntegral],
            &certified,
            Some(secs(120)),
        ),
        criterion(9, "stratum identity residuals and precision scaling", &[Suite::Starstar], &defaults, None),
    ];
    for v in &verdicts {
        println!("criterion {} {}: {} [{}]", v.id, if v.passed { "PASS" } else { "FAIL" }, v.title, v.detail);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    println!("acceptance: {}/{} criteria pass", verdicts.len() - failed.len(), verdicts.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
