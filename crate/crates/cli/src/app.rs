//! Command definitions and dispatch. `run` returns the text to print or a
//! failure carrying the process exit code.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use nakano::criteria::{full_report_with, space_profile, validate, InclusionReport, ReportOptions};
use nakano::exponents::classes;
use nakano::series::SeriesOptions;
use nakano::vectors::{luxemburg_norm_capped, NormError, SparseVector, MAX_ITER};
use nakano::witness::{equality_witness, linf_witness, ratio_decay_profile, GapBound, ProbeError, WitnessError, WitnessSubsequence};
use nakano::{Certificate, Evidence, ExponentSequence, IndexSet, Verdict};
use serde_json::json;

use crate::dsl::{parse_dsl, print_dsl, DslError, DslErrorKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
pub const EXIT_PRECONDITION: i32 = 5;
pub const EXIT_HORIZON: i32 = 6;

/// Indices checked directly before trusting the certified tail of a derived
/// descriptor used as an exponent.
const RANGE_SCAN: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "nakano", version, about = "Norms and inclusion classification for Nakano sequence spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Relative tolerance of norm computations.
    #[arg(long, global = true, default_value_t = 1e-13)]
    pub tol: f64,
    /// Reserved; no command is randomized.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bisection iteration cap.
    #[arg(long, global = true, default_value_t = MAX_ITER)]
    pub max_iter: u32,
    /// Horizon of numeric series probes.
    #[arg(long, global = true, default_value_t = nakano::series::PROBE_HORIZON)]
    pub horizon: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Luxemburg norm of a finitely supported vector.
    Norm {
        p: String,
        /// Inline JSON (`[[i, v], ...]` or `{"entries": ...}`) or a file path.
        vector: String,
    },
    /// Separability, reflexivity and ℓ∞ copies of one space.
    Space { p: String },
    /// Full classification of the inclusion ℓ_p → ℓ_q.
    Compare {
        p: String,
        q: String,
        /// Corrupt the finished report before validation (tests the exit path).
        #[arg(long, hide = true)]
        inject_inconsistency: bool,
    },
    /// Explicit witness subsequence.
    Witness {
        p: String,
        q: Option<String>,
        /// Witness `p_{n_k} >= k` instead of shrinking gaps.
        #[arg(long)]
        linf: bool,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Require gaps `< 1/k` instead of `<= 1/k`.
        #[arg(long)]
        strict: bool,
    },
    /// Norm ratios of flat vectors of increasing length.
    Probe {
        p: String,
        q: String,
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 64, 1024])]
        lengths: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

fn range_error(text: &str, message: String) -> Failure {
    DslError {
        kind: DslErrorKind::Semantic,
        line: 1,
        column: 1,
        message,
        excerpt: format!("{}\n^", text.lines().next().unwrap_or("")),
    }
    .into()
}

fn contains_derived(e: &ExponentSequence) -> bool {
    use ExponentSequence as E;
    match e {
        E::Prefix { tail, .. } => contains_derived(tail),
        E::Merge { on_set, off_set, .. } => contains_derived(on_set) || contains_derived(off_set),
        other => other.is_derived(),
    }
}

/// Parses an exponent and, for derived forms, certifies `1 <= p_n <= inf`.
pub fn parse_exponent(text: &str) -> Result<ExponentSequence, Failure> {
    let e = parse_dsl(text)?;
    if !contains_derived(&e) {
        return Ok(e);
    }
    for k in 0..=20 {
        let cs = classes(&e, 1 << k);
        if cs.iter().any(|c| c.asym.tail.hi < 1.0) {
            break;
        }
        if cs.iter().all(|c| c.asym.tail.lo >= 1.0) {
            let onset = cs.iter().map(|c| c.onset()).max().unwrap_or(1);
            if onset > RANGE_SCAN {
                continue;
            }
            return match (1..onset).find(|&n| !(e.eval(n) >= 1.0)) {
                None => Ok(e),
                Some(n) => Err(range_error(text, format!("value {} at index {n} is below 1", e.eval(n)))),
            };
        }
    }
    match (1..=10_000).find(|&n| !(e.eval(n) >= 1.0)) {
        Some(n) => Err(range_error(text, format!("value {} at index {n} is below 1", e.eval(n)))),
        None => Err(range_error(text, "cannot certify that every value is at least 1".into())),
    }
}

fn parse_vector(arg: &str) -> Result<SparseVector<f64>, Failure> {
    let text = if arg.trim_start().starts_with(['[', '{']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {arg}: {e}")))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("vector JSON: {e}")))?;
    let value = if value.is_array() { json!({ "entries": value }) } else { value };
    serde_json::from_value(value).map_err(|e| Failure::new(EXIT_PARSE, format!("vector JSON: {e}")))
}

fn norm_failure(e: NormError) -> Failure {
    match e {
        NormError::Tolerance { .. } | NormError::NoIterations => Failure::new(EXIT_PARSE, e.to_string()),
    }
}

fn witness_failure(e: WitnessError) -> Failure {
    match e {
        WitnessError::PreconditionUnmet(_) => Failure::new(EXIT_PRECONDITION, e.to_string()),
        WitnessError::HorizonExhausted { .. } => Failure::new(EXIT_HORIZON, e.to_string()),
    }
}

fn probe_failure(e: ProbeError) -> Failure {
    let code = match e {
        ProbeError::PreconditionUnmet(_) | ProbeError::ShortSet(_) => EXIT_PRECONDITION,
        ProbeError::Lengths | ProbeError::Norm(_) => EXIT_PARSE,
        ProbeError::NotConverged(_) => EXIT_NUMERIC,
    };
    Failure::new(code, e.to_string())
}

fn to_json(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn fmt_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| if v.is_infinite() { "inf".to_string() } else { format!("{v}") })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_witness(w: &WitnessSubsequence) -> String {
    let label = match w.kind {
        nakano::witness::WitnessKind::Equality => "gaps",
        nakano::witness::WitnessKind::Linf => "exponents",
    };
    let indices: Vec<String> = w.indices.iter().map(u64::to_string).collect();
    format!(
        "indices: {}\n{label}: {}\ncheck: {} = {} (bound {}, {})\n",
        indices.join(", "),
        fmt_values(&w.values),
        w.checks.description,
        w.checks.partial_sum,
        w.checks.bound,
        if w.checks.holds { "holds" } else { "fails" }
    )
}

pub fn render_report(report: &InclusionReport) -> String {
    let mut out = String::new();
    for (label, v) in report.verdicts() {
        let _ = writeln!(out, "{label}: {}", v.summary_line());
    }
    if let Some(w) = &report.witnesses.equality {
        let _ = write!(out, "equality witness\n{}", render_witness(w));
    }
    if let Some(w) = &report.witnesses.linf {
        let _ = write!(out, "linf witness\n{}", render_witness(w));
    }
    out
}

/// Breaks an invariant `validate` is guaranteed to check.
fn inject(report: &mut InclusionReport) {
    let cert = Certificate::new(Evidence::CanonicalBasis, "injected fault");
    report.compact = Verdict::yes(cert, "Thm 2.1");
}

pub fn run(cli: &Cli) -> Result<String, Failure> {
    let g = &cli.global;
    let series = SeriesOptions {
        probe_horizon: g.horizon,
    };
    match &cli.command {
        Command::Norm { p, vector } => {
            let p = parse_exponent(p)?;
            let x = parse_vector(vector)?;
            let r = luxemburg_norm_capped(&p, &x, g.tol, g.max_iter).map_err(norm_failure)?;
            if !r.converged {
                return Err(Failure::new(
                    EXIT_NUMERIC,
                    format!(
                        "bisection hit the iteration cap ({} iterations); bracket [{}, {}]",
                        r.iterations, r.bracket.0, r.bracket.1
                    ),
                ));
            }
            Ok(if g.json {
                to_json(json!({ "p": print_dsl(&p), "norm": r }))
            } else {
                format!(
                    "norm: {:.12}\nbracket: [{:.12}, {:.12}]\nresidual: {:e}\niterations: {}\n",
                    r.value, r.bracket.0, r.bracket.1, r.residual, r.iterations
                )
            })
        }
        Command::Space { p } => {
            let p = parse_exponent(p)?;
            let s = space_profile(&p);
            Ok(if g.json {
                to_json(json!({ "p": print_dsl(&p), "space": s }))
            } else {
                let mut out = String::new();
                for (label, v) in [
                    ("Separable", &s.separable),
                    ("Reflexive", &s.reflexive),
                    ("Contains linf copy", &s.contains_linf_copy),
                ] {
                    let _ = writeln!(out, "{label}: {}", v.summary_line());
                }
                if let Some(w) = &s.linf_witness {
                    let _ = write!(out, "linf witness\n{}", render_witness(w));
                }
                out
            })
        }
        Command::Compare {
            p,
            q,
            inject_inconsistency,
        } => {
            let (p, q) = (parse_exponent(p)?, parse_exponent(q)?);
            let opts = ReportOptions {
                series,
                ..ReportOptions::default()
            };
            let fail = |e: nakano::criteria::InternalInconsistency| Failure::new(EXIT_INCONSISTENT, e.to_string());
            let mut report = full_report_with(&p, &q, &opts).map_err(fail)?;
            if *inject_inconsistency {
                inject(&mut report);
                validate(&report, &p, &q).map_err(fail)?;
            }
            Ok(if g.json {
                to_json(json!({ "p": print_dsl(&p), "q": print_dsl(&q), "report": report }))
            } else {
                render_report(&report)
            })
        }
        Command::Witness {
            p,
            q,
            linf,
            count,
            strict,
        } => {
            let p = parse_exponent(p)?;
            let w = match (linf, q) {
                (true, None) => linf_witness(&p, *count),
                (false, Some(q)) => {
                    let q = parse_exponent(q)?;
                    let bound = if *strict { GapBound::Strict } else { GapBound::Inclusive };
                    equality_witness(&p, &q, *count, bound)
                }
                (true, Some(_)) => return Err(Failure::new(EXIT_PARSE, "--linf takes a single exponent")),
                (false, None) => return Err(Failure::new(EXIT_PARSE, "equality witness needs two exponents (or --linf)")),
            }
            .map_err(witness_failure)?;
            Ok(if g.json {
                to_json(serde_json::to_value(&w).expect("witness serializes"))
            } else {
                render_witness(&w)
            })
        }
        Command::Probe { p, q, lengths } => {
            let (p, q) = (parse_exponent(p)?, parse_exponent(q)?);
            let prof = ratio_decay_profile(&p, &q, &IndexSet::All, lengths, g.tol).map_err(probe_failure)?;
            Ok(if g.json {
                to_json(serde_json::to_value(&prof).expect("profile serializes"))
            } else {
                prof.to_string()
            })
        }
    }
}
