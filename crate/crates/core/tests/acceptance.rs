//! One line per acceptance criterion. Documented counterexamples are
//! reported as FAIL but do not abort the run; anything else does.

use std::io::Write as _;
use std::time::Instant;

use hdint_core::suites::{self, SuiteReport, DEFAULT_SEED};

const SEED: u64 = DEFAULT_SEED;

struct Outcome {
    line: String,
    fatal: Option<String>,
}

fn verdict(n: u32, what: &str, reports: &[SuiteReport]) -> Outcome {
    let pass = reports.iter().all(SuiteReport::passed);
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let known: usize = reports.iter().map(|r| r.known_failures.len()).sum();
    let redrawn: usize = reports.iter().map(|r| r.redrawn).sum();
    let undefined: usize = reports.iter().map(|r| r.undefined).sum();
    let mut line = format!(
        "criterion {n}: {} {what} ({cases} cases, {failures} failures",
        if pass { "PASS" } else { "FAIL" }
    );
    if known > 0 {
        line += &format!(", {known} known counterexamples");
    }
    if redrawn > 0 {
        line += &format!(", {redrawn} unrepresentable draws replaced");
    }
    if undefined > 0 {
        line += &format!(", {undefined} draws with an undefined integral replaced");
    }
    line += ")";
    if let Some(example) = reports.iter().find_map(|r| r.known_failures.first()) {
        line += &format!("\n  d^H triangle fails under max-dimension addition, e.g. {example}");
    }
    let fatal = reports
        .iter()
        .find(|r| !r.only_known_failures())
        .map(|r| r.to_string());
    Outcome { line, fatal }
}

fn readme_states_limitation() -> bool {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    std::fs::read_to_string(path).is_ok_and(|text| {
        let t = text.to_lowercase();
        t.contains("## limitations") && t.contains("completeness") && t.contains("borel")
    })
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut outcomes = vec![
        verdict(1, "worked examples, exact", &[suites::worked_examples()]),
        verdict(
            2,
            "pair algebra on 10^4 triples",
            &[suites::pair_algebra(SEED, 10_000)],
        ),
        verdict(
            3,
            "series theorem on 100 instances",
            &[suites::series_theorem(SEED, 100)],
        ),
        verdict(
            4,
            "integral laws, 500 cases each",
            &[suites::integral_laws(SEED, 500)],
        ),
        verdict(
            5,
            "Beppo-Levi and Fatou, 200 chains each",
            &[suites::beppo_levi(SEED, 200), suites::fatou(SEED, 200)],
        ),
        verdict(
            6,
            "h-metric axioms",
            &[
                suites::pair_metric(SEED, 10_000),
                suites::set_metric(SEED, 500),
                suites::function_metric(SEED, 500),
            ],
        ),
        verdict(
            7,
            "Riesz-Fischer on 100 Cauchy sequences",
            &[suites::riesz_fischer(SEED, 100)],
        ),
        verdict(
            8,
            "Cantor measure, box counts and scaling",
            &[suites::fractal(SEED, 100)],
        ),
        verdict(9, "deficiency battery", &[suites::deficiency_battery()]),
    ];
    let documented = readme_states_limitation();
    outcomes.push(Outcome {
        line: format!(
            "criterion 10: {} completeness and arbitrary Borel sets rest on the property suites; README states the limitation",
            if documented { "PASS" } else { "FAIL" }
        ),
        fatal: (!documented).then(|| String::from("README.md has no limitations section")),
    });
    // the stdout handle is not captured by the harness, so the verdicts show
    // up in a plain `cargo test` run
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        let _ = writeln!(out, "{}", o.line);
    }
    let _ = writeln!(
        out,
        "acceptance run took {:.1} s",
        start.elapsed().as_secs_f64()
    );
    drop(out);
    let fatal: Vec<&String> = outcomes.iter().filter_map(|o| o.fatal.as_ref()).collect();
    assert!(
        fatal.is_empty(),
        "{}",
        fatal
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
