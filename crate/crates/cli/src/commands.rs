use serde_json::{json, Value};

use hdint_core::deficiency::{
    defi_continuity_cluster, defi_continuity_dist, defi_continuity_osc, defi_convex, defi_even,
    planar_hmeasure, LineFunction, PlanarSet,
};
use hdint_core::doc::{parse_document, DocError, Document};
use hdint_core::hintegral::{h_integral, Domain, PiecewiseFunction};
use hdint_core::metrics::{d_H, d_s, HDistance};
use hdint_core::num::{fmt_rational, Ball};
use hdint_core::oracle::{box_dim_estimate, premeasure_estimate, quadrature};
use hdint_core::setalg::{hmeasure, AtomKind, RepSet};
use hdint_core::suites::{self, SuiteReport};
use hdint_core::{Dimension, HError, HPair};

use crate::config::Settings;

pub enum Failure {
    Domain(HError),
    Parse(String),
    Invalid(String),
}

/// Exit code when a check suite reports failures.
pub const CHECK_FAILED: i32 = 3;

impl From<HError> for Failure {
    fn from(e: HError) -> Self {
        Failure::Domain(e)
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Parse { .. } => Failure::Parse(e.to_string()),
            DocError::Validation { .. } => Failure::Invalid(e.to_string()),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(_) | Failure::Invalid(_) => 1,
            Failure::Parse(_) => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Parse(m) | Failure::Invalid(m) => m.clone(),
        }
    }
}

pub type Outcome = Result<Output, Failure>;

/// What a command prints: a human line and a JSON value.
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn render(&self, settings: &Settings) -> String {
        if settings.json {
            serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
        } else {
            self.text.clone()
        }
    }
}

fn pair_output(p: HPair) -> Output {
    Output {
        text: p.to_string(),
        json: p.to_json(),
    }
}

fn distance_output(d: HDistance) -> Output {
    pair_output(d.value)
}

fn set(text: &str) -> Result<RepSet, Failure> {
    match parse_document(text)? {
        Document::Set(s) => Ok(s),
        _ => Err(Failure::Invalid(String::from("expected a set document"))),
    }
}

fn line_function(text: &str) -> Result<LineFunction, Failure> {
    match parse_document(text)? {
        Document::Function(f) => Ok(f),
        _ => Err(Failure::Invalid(String::from(
            "expected a function document",
        ))),
    }
}

/// A function without unbounded polynomial tails.
fn function(text: &str) -> Result<PiecewiseFunction, Failure> {
    let f = line_function(text)?;
    if f.left().is_some() || f.right().is_some() {
        return Err(HError::NotSupported(String::from(
            "polynomial tails have no finite integral; drop 'left'/'right'",
        ))
        .into());
    }
    Ok(f.core().clone())
}

fn planar(text: &str) -> Result<PlanarSet, Failure> {
    match parse_document(text)? {
        Document::Planar(p) => Ok(p),
        _ => Err(Failure::Invalid(String::from("expected a planar document"))),
    }
}

pub fn measure(doc: &str) -> Outcome {
    Ok(pair_output(match parse_document(doc)? {
        Document::Set(s) => hmeasure(&s),
        Document::Planar(p) => planar_hmeasure(&p),
        _ => {
            return Err(Failure::Invalid(String::from(
                "measure takes a set or planar document",
            )))
        }
    }))
}

pub fn integrate(doc: &str, on: Option<&str>) -> Outcome {
    let f = function(doc)?;
    let domain = match on {
        Some(s) => Domain::Set(set(s)?),
        None => Domain::All,
    };
    Ok(pair_output(h_integral(&f, &domain)?))
}

pub fn distance_sets(a: &str, b: &str) -> Outcome {
    Ok(distance_output(d_s(&set(a)?, &set(b)?)?))
}

pub fn distance_functions(a: &str, b: &str) -> Outcome {
    Ok(distance_output(d_H(
        &function(a)?,
        &function(b)?,
        &Domain::All,
    )?))
}

pub const DEFI_KINDS: [&str; 5] = [
    "continuity-osc",
    "continuity-dist",
    "cluster",
    "even",
    "convex",
];

pub fn defi(kind: &str, doc: &str) -> Outcome {
    let value = match kind {
        "continuity-osc" => defi_continuity_osc(&line_function(doc)?)?,
        "continuity-dist" => defi_continuity_dist(&line_function(doc)?)?,
        "cluster" => defi_continuity_cluster(&line_function(doc)?)?,
        "even" => defi_even(&function(doc)?)?,
        "convex" => defi_convex(&planar(doc)?)?,
        other => {
            return Err(Failure::Parse(format!(
                "unknown deficiency '{other}'; expected one of {}",
                DEFI_KINDS.join(", ")
            )))
        }
    };
    Ok(pair_output(value))
}

pub const SUITES: [&str; 12] = [
    "pair-algebra",
    "series",
    "integral-laws",
    "beppo-levi",
    "fatou",
    "pair-metric",
    "set-metric",
    "function-metric",
    "riesz-fischer",
    "fractal",
    "deficiency",
    "paper-examples",
];

/// Default draws per suite, matching the acceptance run.
fn default_cases(suite: &str) -> usize {
    match suite {
        "pair-algebra" | "pair-metric" => 10_000,
        "integral-laws" | "set-metric" | "function-metric" => 500,
        "beppo-levi" | "fatou" => 200,
        _ => 100,
    }
}

fn run_suite(suite: &str, seed: u64, cases: usize) -> Result<SuiteReport, Failure> {
    Ok(match suite {
        "pair-algebra" => suites::pair_algebra(seed, cases),
        "series" => suites::series_theorem(seed, cases),
        "integral-laws" => suites::integral_laws(seed, cases),
        "beppo-levi" => suites::beppo_levi(seed, cases),
        "fatou" => suites::fatou(seed, cases),
        "pair-metric" => suites::pair_metric(seed, cases),
        "set-metric" => suites::set_metric(seed, cases),
        "function-metric" => suites::function_metric(seed, cases),
        "riesz-fischer" => suites::riesz_fischer(seed, cases),
        "fractal" => suites::fractal(seed, cases),
        "deficiency" => suites::deficiency_battery(),
        "paper-examples" => suites::worked_examples(),
        other => {
            return Err(Failure::Parse(format!(
                "unknown suite '{other}'; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}

fn report_json(r: &SuiteReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| json!({"label": row.label, "expected": row.expected, "actual": row.actual, "ok": row.ok}))
        .collect();
    json!({
        "suite": r.name,
        "passed": r.passed(),
        "cases": r.cases,
        "failures": r.failures,
        "known_counterexamples": r.known_failures,
        "unrepresentable_redraws": r.redrawn,
        "undefined_redraws": r.undefined,
        "rows": rows,
    })
}

/// Runs a suite; the report is printed either way, failure sets exit code 3.
pub fn check(suite: &str, seed: u64, cases: Option<usize>) -> Result<(Output, bool), Failure> {
    let report = run_suite(suite, seed, cases.unwrap_or_else(|| default_cases(suite)))?;
    let out = Output {
        text: report.to_string(),
        json: report_json(&report),
    };
    Ok((out, report.passed()))
}

fn ball_json(b: &Ball) -> Value {
    json!({"mid": b.mid, "rad": b.rad})
}

pub fn estimate_dim(doc: &str, settings: &Settings) -> Outcome {
    let s = set(doc)?;
    let depths: Vec<u32> = settings.depths.clone().collect();
    let est = box_dim_estimate(&s, &depths)?;
    let exact = hmeasure(&s).d;
    let counts: Vec<Value> = est
        .reports
        .iter()
        .map(|r| json!({"depth": r.depth, "boxes": r.box_count.to_string()}))
        .collect();
    Ok(Output {
        text: format!(
            "box-count slope {:.15} +- {:.1e} over depths {}..{}; exact dimension {} = {:.15}",
            est.slope.mid,
            est.slope.rad,
            settings.depths.start(),
            settings.depths.end(),
            exact,
            exact.to_f64()
        ),
        json: json!({"slope": ball_json(&est.slope), "exact": exact.to_string(), "counts": counts}),
    })
}

pub fn estimate_premeasure(doc: &str, d: Option<&str>, settings: &Settings) -> Outcome {
    let s = set(doc)?;
    let d: Dimension = match d {
        Some(t) => t.parse()?,
        None => hmeasure(&s).d,
    };
    let mut lines = vec![];
    let mut rows = vec![];
    for k in settings.depths.clone() {
        let rep = premeasure_estimate(&s, &d, k)?;
        let sum = rep.premeasure.expect("dimension was given");
        lines.push(format!(
            "depth {k:>2}: {} boxes, sum {:.15}",
            rep.box_count, sum.mid
        ));
        rows.push(json!({"depth": k, "boxes": rep.box_count.to_string(), "sum": ball_json(&sum)}));
    }
    Ok(Output {
        text: format!("premeasure at d = {d}\n{}", lines.join("\n")),
        json: json!({"d": d.to_string(), "depths": rows}),
    })
}

pub fn estimate_quad(doc: &str, panels: u32) -> Outcome {
    let f = function(doc)?;
    let hull = f
        .terms()
        .iter()
        .filter_map(|t| match &t.atom.kind {
            AtomKind::Interval { lo, hi } => Some((lo.clone(), hi.clone())),
            _ => None,
        })
        .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)));
    let Some((lo, hi)) = hull else {
        return Err(HError::NotSupported(String::from(
            "quadrature needs an interval-supported term",
        ))
        .into());
    };
    let b = quadrature(&f, &lo, &hi, panels)?;
    Ok(Output {
        text: format!(
            "quadrature over [{}, {}] with {panels} panels: {:.12} +- {:.1e}",
            fmt_rational(&lo),
            fmt_rational(&hi),
            b.mid,
            b.rad
        ),
        json: json!({"lo": fmt_rational(&lo), "hi": fmt_rational(&hi), "panels": panels, "value": ball_json(&b)}),
    })
}
