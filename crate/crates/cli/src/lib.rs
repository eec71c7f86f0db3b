//! Command-line front end for `sl3char`.

pub mod expr;
pub mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sl3char::oracle::sample_points;
use sl3char::poisson::Surface;
use sl3char::{bracket, linalg, relation, Exec};

use crate::suites::{run_suite, Settings, Suite};

pub const SCHEMA: &str = "sl3char.report/1";

#[derive(Parser, Debug)]
#[command(
    name = "sl3char",
    version,
    about = "Trace-coordinate algebra and Poisson checks for SL(3,C) characters of F2"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// RNG seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sampled points.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Relative tolerance for symbolic-vs-numeric agreement.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_sym: f64,
    /// Relative singular-value cutoff for numeric ranks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_rank: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl Global {
    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            samples: self.samples,
            tol_sym: self.tol_sym,
            tol_rank: self.tol_rank,
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the defining relation.
    Ring {
        #[command(subcommand)]
        what: RingCommand,
    },
    /// Bracket of two expressions.
    Bracket {
        #[arg(long)]
        surface: Surface,
        lhs: String,
        rhs: String,
    },
    /// Histogram of the numeric bi-vector rank over sampled points.
    Rank {
        #[arg(long)]
        surface: Surface,
    },
    /// Sampled character points with their generating matrices.
    Sample {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite.
    Verify { suite: Suite },
}

#[derive(Subcommand, Debug)]
pub enum RingCommand {
    /// P, Q and the relation in canonical form.
    Dump,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize, Debug)]
pub struct Tolerances {
    pub symbolic: f64,
    pub rank: f64,
    pub relation: f64,
    pub singularity: f64,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub pass: bool,
    pub checks: Vec<suites::Check>,
    pub sign: Option<i8>,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

pub fn build_report(suite: Suite, global: &Global) -> sl3char::Result<Report> {
    let settings = global.settings();
    let start = Instant::now();
    let outcome = run_suite(suite, &settings)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(Report {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        suite: suite.name(),
        seed: settings.seed,
        samples: settings.samples,
        tolerances: Tolerances {
            symbolic: settings.tol_sym,
            rank: settings.tol_rank,
            relation: sl3char::tol::RELATION,
            singularity: sl3char::tol::SINGULARITY,
        },
        pass: outcome.pass(),
        checks: outcome.checks,
        sign: outcome.sign,
        diagnostics: outcome.diagnostics,
        timings_ms: global
            .timings
            .then(|| BTreeMap::from([("total".to_string(), elapsed)])),
    })
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and errors to `err`. Returns the process exit code:
/// 0 pass, 1 check failure, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] sl3char::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Ring {
            what: RingCommand::Dump,
        } => {
            let rel = relation();
            if g.json {
                let value = serde_json::json!({
                    "P": rel.p().to_string(),
                    "Q": rel.q().to_string(),
                    "P_terms": rel.p().len(),
                    "Q_terms": rel.q().len(),
                    "relation": "t(5)^2 - P * t(5) + Q",
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
            } else {
                writeln!(out, "P ({} terms) = {}", rel.p().len(), rel.p())?;
                writeln!(out, "Q ({} terms) = {}", rel.q().len(), rel.q())?;
                writeln!(out, "relation: t(5)^2 - P * t(5) + Q = 0")?;
            }
            Ok(0)
        }
        Command::Bracket { surface, lhs, rhs } => {
            let f = expr::parse_element(lhs).map_err(|e| Failure::Usage(e.to_string()))?;
            let h = expr::parse_element(rhs).map_err(|e| Failure::Usage(e.to_string()))?;
            let b = bracket(&f, &h, surface.bivector());
            if g.json {
                let value = serde_json::json!({
                    "surface": surface.name(),
                    "a": b.a().to_string(),
                    "b": b.b().to_string(),
                    "value": b.to_string(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
            } else {
                writeln!(out, "{b}")?;
            }
            Ok(0)
        }
        Command::Rank { surface } => {
            let numeric = surface.bivector().numeric();
            let points = sample_points(g.seed, g.samples, g.settings().exec)?;
            let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
            for p in &points {
                *histogram
                    .entry(linalg::numeric_rank(
                        &numeric.matrix(p.values()),
                        g.tol_rank,
                    ))
                    .or_default() += 1;
            }
            if g.json {
                let value = serde_json::json!({
                    "surface": surface.name(),
                    "seed": g.seed,
                    "samples": g.samples,
                    "histogram": histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
            } else {
                for (rank, count) in &histogram {
                    writeln!(out, "rank {rank}: {count}")?;
                }
            }
            Ok(0)
        }
        Command::Sample { count, format } => {
            let points = sample_points(g.seed, *count, g.settings().exec)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&points)?)?,
                Format::Csv => {
                    let header: Vec<String> = sl3char::VarIndex::ALL
                        .iter()
                        .flat_map(|v| [format!("re {v}"), format!("im {v}")])
                        .collect();
                    writeln!(out, "index,{}", header.join(","))?;
                    for (k, p) in points.iter().enumerate() {
                        let cells: Vec<String> = p
                            .values()
                            .iter()
                            .flat_map(|z| [format!("{:e}", z.re), format!("{:e}", z.im)])
                            .collect();
                        writeln!(out, "{k},{}", cells.join(","))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let report = build_report(*suite, g)?;
            if g.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                for c in &report.checks {
                    writeln!(
                        out,
                        "{} {}: {}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )?;
                }
                for d in &report.diagnostics {
                    writeln!(out, "  note: {d}")?;
                }
                if let Some(ms) = report.timings_ms.as_ref().and_then(|t| t.get("total")) {
                    writeln!(out, "time: {ms:.0} ms")?;
                }
            }
            match report.checks.iter().find(|c| !c.pass) {
                Some(c) => {
                    writeln!(err, "check failed: {}", c.name)?;
                    Ok(1)
                }
                None => Ok(0),
            }
        }
    }
}
