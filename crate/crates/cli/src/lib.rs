//! Command-line front end. Every subcommand reads JSON documents, calls one
//! library entry point and prints `{"manifest": ..., "result": ...}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use turan_core::capacity::{self, FeketeConfig};
use turan_core::geometry::GridConfig;
use turan_core::optimizer::{self, SearchConfig};
use turan_core::{io, norms, Error, Norm, QuadratureConfig};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_INPUT: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const VIOLATION: i32 = 4;
    pub const NUMERIC: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "turan", version, about = "Turán-type inequalities on convex domains")]
pub struct Cli {
    /// Record the wall-clock time in the manifest. Off by default so that
    /// reports are reproducible byte for byte.
    #[arg(long, global = true)]
    pub stamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry summary of a domain.
    Analyze {
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Measure M_q(p) for a zero set.
    Oscillation {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        zeros: PathBuf,
        /// Exponent q >= 1, or "inf".
        #[arg(long, default_value = "2")]
        q: Norm,
        /// Zeros may lie this far outside the domain.
        #[arg(long, default_value_t = 1e-9)]
        zero_tol: f64,
        #[command(flatten)]
        quadrature: QuadArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Multi-start search for small M_q(p).
    Search {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "2")]
        q: Norm,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        quadrature: QuadArgs,
        /// Write the per-restart trace here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the inequality suites; exits 4 on any violation.
    Verify {
        #[arg(long)]
        domain: PathBuf,
        /// Degrees, e.g. "1-8" or "1,2,5".
        #[arg(long, default_value = "1-8")]
        n: String,
        /// Exponents, e.g. "1,2,inf".
        #[arg(long, default_value = "1,2,inf")]
        q: String,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        quadrature: QuadArgs,
        /// Write one row per check here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Transfinite diameter: closed form and Fekete estimate.
    Capacity {
        /// A domain, segment or real-intervals document.
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 64)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = FeketeConfig::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = FeketeConfig::default().max_sweeps)]
        max_sweeps: usize,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = GridConfig::default().samples)]
    pub grid_samples: usize,
    #[arg(long, default_value_t = GridConfig::default().refinements)]
    pub grid_refinements: usize,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, default_value_t = QuadratureConfig::default().nodes)]
    pub nodes: usize,
    #[arg(long, default_value_t = QuadratureConfig::default().initial_panels)]
    pub panels: usize,
    #[arg(long, default_value_t = QuadratureConfig::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = QuadratureConfig::default().max_depth)]
    pub max_depth: usize,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            nodes: self.nodes,
            initial_panels: self.panels,
            rel_tol: self.rel_tol,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = SearchConfig::default().max_iter)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SearchConfig::default().tol)]
    pub tol: f64,
}

impl SearchArgs {
    fn config(&self, quadrature: QuadratureConfig) -> SearchConfig {
        SearchConfig {
            restarts: self.restarts,
            max_iter: self.max_iter,
            seed: self.seed,
            tol: self.tol,
            quadrature,
            ..SearchConfig::default()
        }
    }
}

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config: Value,
    pub version: String,
    /// Seconds since the Unix epoch, only with `--stamp`.
    pub timestamp: Option<u64>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Invalid(_) | Error::OutOfRange(_) | Error::Parse(_) => exit::INVALID_INPUT,
            Error::Precondition(_) => exit::PRECONDITION,
            Error::Pole { .. } => exit::NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: exit::INVALID_INPUT,
            message: format!("csv export: {e}"),
        }
    }
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Parses "1-8", "1..8" or "1,2,5".
pub fn parse_degrees(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid degree list {s:?}");
    let range = s.split_once('-').or_else(|| s.split_once(".."));
    let list: Vec<usize> = match range {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            (a..=b).collect()
        }
        None => s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
    };
    if list.is_empty() || list.contains(&0) {
        return Err(bad());
    }
    Ok(list)
}

pub fn parse_norms(s: &str) -> Result<Vec<Norm>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<Norm>().map_err(|e| e.to_string()))
        .collect()
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn finite(label: &str, values: &[f64]) -> Result<(), Failure> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(failure(exit::NUMERIC, format!("{label} is not finite ({v})"))),
        None => Ok(()),
    }
}

struct Outcome {
    command: &'static str,
    inputs: Vec<String>,
    config: Value,
    result: Value,
    code: i32,
    diagnostics: Vec<String>,
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Analyze { domain, grid } => {
            let k = io::read_domain(domain)?;
            let cfg = GridConfig {
                samples: grid.grid_samples,
                refinements: grid.grid_refinements,
            };
            Ok(Outcome {
                command: "analyze",
                inputs: vec![display(domain)],
                config: to_value(&cfg),
                result: to_value(&k.summarize_with(&cfg)),
                code: exit::OK,
                diagnostics: Vec::new(),
            })
        }
        Command::Oscillation {
            domain,
            zeros,
            q,
            zero_tol,
            quadrature,
            csv,
        } => {
            let k = io::read_domain(domain)?;
            let p = io::read_zeros(zeros)?;
            let outside: Vec<String> = p
                .zeros()
                .iter()
                .filter(|z| !k.contains(**z, *zero_tol))
                .map(|z| format!("[{}, {}]", z.re, z.im))
                .collect();
            if !outside.is_empty() {
                return Err(failure(
                    exit::PRECONDITION,
                    format!("zeros outside the domain: {}", outside.join(", ")),
                ));
            }
            let qc = quadrature.config();
            let report = norms::oscillation_ratio(&k, &p, *q, &qc)?;
            finite("oscillation", &[report.oscillation, report.lq_norm_p, report.lq_norm_dp])?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record([
                    "q", "lq_norm_p", "lq_norm_dp", "sup_norm_p", "oscillation", "error_p",
                    "error_dp", "converged", "h_intervals",
                ])?;
                w.write_record([
                    report.q.to_string(),
                    report.lq_norm_p.to_string(),
                    report.lq_norm_dp.to_string(),
                    report.sup_norm_p.to_string(),
                    report.oscillation.to_string(),
                    report.error_p.to_string(),
                    report.error_dp.to_string(),
                    report.converged.to_string(),
                    report.h_intervals.len().to_string(),
                ])?;
                w.flush().map_err(|e| failure(exit::INVALID_INPUT, e.to_string()))?;
            }
            Ok(Outcome {
                command: "oscillation",
                inputs: vec![display(domain), display(zeros)],
                config: serde_json::json!({"q": q, "zero_tol": zero_tol, "quadrature": qc}),
                result: to_value(&report),
                code: exit::OK,
                diagnostics: Vec::new(),
            })
        }
        Command::Search {
            domain,
            n,
            q,
            search,
            quadrature,
            csv,
        } => {
            let k = io::read_domain(domain)?;
            let cfg = search.config(quadrature.config());
            let r = optimizer::minimize_oscillation(&k, *n, *q, &cfg)?;
            finite("best value", &[r.best_value])?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                for t in &r.trace {
                    w.serialize(t)?;
                }
                w.flush().map_err(|e| failure(exit::INVALID_INPUT, e.to_string()))?;
            }
            let mut diagnostics = Vec::new();
            let code = if r.violation {
                diagnostics.push(format!(
                    "best value {} is below the certified bound {}",
                    r.best_value, r.lower_bound
                ));
                exit::VIOLATION
            } else {
                exit::OK
            };
            Ok(Outcome {
                command: "search",
                inputs: vec![display(domain)],
                config: serde_json::json!({"n": n, "q": q, "search": cfg}),
                result: to_value(&r),
                code,
                diagnostics,
            })
        }
        Command::Verify {
            domain,
            n,
            q,
            search,
            quadrature,
            csv,
        } => {
            let k = io::read_domain(domain)?;
            let degrees = parse_degrees(n).map_err(|m| failure(exit::INVALID_INPUT, m))?;
            let exponents = parse_norms(q).map_err(|m| failure(exit::INVALID_INPUT, m))?;
            let cfg = search.config(quadrature.config());
            let r = optimizer::verify_paper_bounds(&k, &degrees, &exponents, &cfg)?;
            let mut lines = vec![
                format!(
                    "{} geometry h_K = {} >= mu_K = {}",
                    verdict(r.depth_check.holds),
                    r.geometry.depth,
                    r.geometry.mu
                ),
                format!(
                    "{} f_check min = {} at t = {}, supporting line = {}",
                    verdict(r.f_check.holds),
                    r.f_check.grid_min,
                    r.f_check.argmin,
                    r.f_check.supporting_line
                ),
            ];
            let mut rows = Vec::new();
            for e in &r.entries {
                for c in &e.checks {
                    lines.push(format!(
                        "{} n={} q={} {}: {} vs {}",
                        verdict(c.holds),
                        e.n,
                        e.q,
                        c.name,
                        c.lhs,
                        c.rhs
                    ));
                    rows.push((e.n, e.q.to_string(), c.clone()));
                }
                if let Some(l) = &e.localdepth {
                    lines.push(format!(
                        "{} n={} q={} localdepth: {} pointwise samples, worst ratio {:?}, norm form {:?}",
                        verdict(l.holds),
                        e.n,
                        e.q,
                        l.pointwise_samples,
                        l.worst_pointwise_ratio,
                        l.norm_fallback.as_ref().map(|c| c.margin)
                    ));
                }
            }
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["n", "q", "check", "holds", "lhs", "rhs", "margin"])?;
                for (n, q, c) in rows {
                    w.write_record([
                        n.to_string(),
                        q,
                        c.name,
                        c.holds.to_string(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        c.margin.to_string(),
                    ])?;
                }
                w.flush().map_err(|e| failure(exit::INVALID_INPUT, e.to_string()))?;
            }
            Ok(Outcome {
                command: "verify",
                inputs: vec![display(domain)],
                config: serde_json::json!({"n": degrees, "q": exponents, "search": cfg}),
                result: to_value(&r),
                code: if r.holds { exit::OK } else { exit::VIOLATION },
                diagnostics: lines,
            })
        }
        Command::Capacity {
            domain,
            m,
            seed,
            restarts,
            max_sweeps,
        } => {
            let set = io::read_compact_set(domain)?;
            let cfg = FeketeConfig {
                restarts: *restarts,
                max_sweeps: *max_sweeps,
                ..FeketeConfig::default()
            };
            let r = capacity::capacity_report(&set, *m, *seed, &cfg)?;
            finite("Fekete estimate", &[r.fekete.delta_m, r.fekete.potential_estimate])?;
            Ok(Outcome {
                command: "capacity",
                inputs: vec![display(domain)],
                config: serde_json::json!({"m": m, "seed": seed, "fekete": cfg}),
                result: to_value(&r),
                code: exit::OK,
                diagnostics: Vec::new(),
            })
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if code == 0 { exit::OK } else { exit::INVALID_INPUT };
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let manifest = RunManifest {
                command: o.command.to_string(),
                inputs: o.inputs,
                config: o.config,
                version: turan_core::VERSION.to_string(),
                timestamp: cli.stamp.then(|| {
                    SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0)
                }),
            };
            let doc = serde_json::json!({"manifest": manifest, "result": o.result});
            let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
            let _ = writeln!(out, "{text}");
            for line in o.diagnostics {
                let _ = writeln!(err, "{line}");
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
