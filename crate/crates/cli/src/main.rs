//! `hdint`: dimension-measure pairs, integrals, distances and deficiencies
//! from JSON documents.
//!
//! Exit codes: 0 success, 1 domain error, 2 parse or usage error, 3 a check
//! suite failed.

mod commands;
mod config;

use std::io::{self, Read as _, Write as _};
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Outcome};
use config::{FileConfig, Settings};

#[derive(Parser)]
#[command(
    name = "hdint",
    version,
    about = "Exact dimension-measure integrals on a computable set algebra"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the random check suites
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap in bits for separating logarithmic dimensions
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Tolerance for comparing interval measures, as a rational
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Depth range for estimates, `a..b`
    #[arg(long, global = true)]
    depths: Option<String>,
    /// Config file (default: $HDINT_CONFIG or ~/.config/hdint/config.toml)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Documents are JSON text, `@path` for a file, or `-` (or nothing) for stdin.
#[derive(Subcommand)]
enum Command {
    /// Dimension and measure of a set or planar set
    Measure { doc: Option<String> },
    /// Integral of a function, optionally over a set
    Integrate {
        doc: Option<String>,
        #[arg(long)]
        on: Option<String>,
    },
    /// h-distance between two sets or two functions
    Distance {
        #[command(subcommand)]
        what: DistanceKind,
    },
    /// Deficiency: continuity-osc, continuity-dist, cluster, even, convex
    Defi { kind: String, doc: Option<String> },
    /// Run a seeded check suite
    Check {
        suite: String,
        /// Draws per law (default: the acceptance size)
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Numerical oracles
    Estimate {
        #[command(subcommand)]
        what: EstimateKind,
    },
}

#[derive(Subcommand)]
enum DistanceKind {
    Sets { a: String, b: String },
    Functions { a: String, b: String },
}

#[derive(Subcommand)]
enum EstimateKind {
    /// Box-counting slope over `--depths`
    Dim { doc: Option<String> },
    /// Cover sums `sum diam^d` at each depth
    Premeasure {
        doc: Option<String>,
        /// Dimension such as `1/2` or `log(2)/log(3)` (default: the exact one)
        #[arg(long)]
        d: Option<String>,
    },
    /// Midpoint quadrature of the interval-supported terms
    Quad {
        doc: Option<String>,
        #[arg(long, default_value_t = 4096)]
        panels: u32,
    },
}

fn read_doc(arg: Option<&str>) -> Result<String, Failure> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Parse(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(a) => match a.strip_prefix('@') {
            Some(path) => {
                std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
            }
            None => Ok(a.to_string()),
        },
    }
}

fn settings(g: &Global) -> Result<Settings, Failure> {
    let file = match (&g.config, config::default_path()) {
        (Some(p), _) => config::load(p, true),
        (None, Some(p)) => config::load(&p, false),
        (None, None) => Ok(FileConfig::default()),
    }
    .map_err(|e| Failure::Parse(format!("config: {e}")))?;
    let flags = FileConfig {
        json: g.json.then_some(true),
        seed: g.seed,
        precision: g.precision,
        tolerance: g.tolerance.clone(),
        depths: g.depths.clone(),
    };
    Settings::merge(file, flags).map_err(Failure::Parse)
}

/// Runs the command; the flag says whether a check suite passed.
fn run(cmd: &Command, s: &Settings) -> Result<(commands::Output, bool), Failure> {
    let plain = |o: Outcome| o.map(|out| (out, true));
    match cmd {
        Command::Measure { doc } => plain(commands::measure(&read_doc(doc.as_deref())?)),
        Command::Integrate { doc, on } => {
            let on = on.as_deref().map(|o| read_doc(Some(o))).transpose()?;
            plain(commands::integrate(
                &read_doc(doc.as_deref())?,
                on.as_deref(),
            ))
        }
        Command::Distance { what } => match what {
            DistanceKind::Sets { a, b } => plain(commands::distance_sets(
                &read_doc(Some(a))?,
                &read_doc(Some(b))?,
            )),
            DistanceKind::Functions { a, b } => plain(commands::distance_functions(
                &read_doc(Some(a))?,
                &read_doc(Some(b))?,
            )),
        },
        Command::Defi { kind, doc } => plain(commands::defi(kind, &read_doc(doc.as_deref())?)),
        Command::Check { suite, cases } => commands::check(suite, s.seed, *cases),
        Command::Estimate { what } => match what {
            EstimateKind::Dim { doc } => {
                plain(commands::estimate_dim(&read_doc(doc.as_deref())?, s))
            }
            EstimateKind::Premeasure { doc, d } => plain(commands::estimate_premeasure(
                &read_doc(doc.as_deref())?,
                d.as_deref(),
                s,
            )),
            EstimateKind::Quad { doc, panels } => {
                plain(commands::estimate_quad(&read_doc(doc.as_deref())?, *panels))
            }
        },
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match settings(&cli.global) {
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
        Ok(s) => {
            hdint_core::num::set_precision_bits(s.precision);
            hdint_core::num::set_tolerance(s.tolerance);
            match run(&cli.command, &s) {
                Ok((out, passed)) => {
                    // a closed pipe is not worth a panic
                    let _ = writeln!(io::stdout(), "{}", out.render(&s));
                    if passed {
                        0
                    } else {
                        commands::CHECK_FAILED
                    }
                }
                Err(f) => {
                    eprintln!("error: {}", f.message());
                    f.exit_code()
                }
            }
        }
    };
    process::exit(code);
}
