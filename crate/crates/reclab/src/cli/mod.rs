//! Command-line surface. Every command prints deterministic output: fixed
//! formatting, no timestamps, data files byte-identical across reruns.
//!
//! Exit codes: 0 success, 2 parse error, 3 precision error,
//! 4 verification failure, 1 anything else. Failures emit a one-line JSON
//! object on stderr. `RECLAB_DIGITS` overrides the default evaluation
//! precision of 200 significant digits.

mod alpha_spec;

pub use alpha_spec::AlphaSpec;

use crate::chain::{self, ChainModel, ChainState};
use crate::diophantine::{self, ApproximationProblem};
use crate::error::{Error, Result};
use crate::experiments::{self, QuantumSpectrum, ScalingRun};
use crate::precision::{digits10, pow10, HPReal};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Default evaluation precision in significant decimal digits.
const DEFAULT_DIGITS: u32 = 200;

/// Extra alpha digits beyond `digits10(Q)`: evaluation precision minus the
/// ~30 guard digits already spent on building the lattice.
fn alpha_digits(scale: &BigInt, eval_digits: u32) -> u32 {
    digits10(scale) as u32 + eval_digits.saturating_sub(30) + 20
}

#[derive(Parser)]
#[command(
    name = "reclab",
    version,
    about = "Exact Poincaré recurrence times via LLL lattice reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one simultaneous-approximation instance.
    Approx {
        /// Alpha specification, e.g. "sqrt:[2,3,5]", "chain:15",
        /// or "[1.41421356@9, 1.7320508@8]"
        #[arg(long)]
        alphas: String,
        /// Magnitude parameter, e.g. 1e35 (parsed exactly)
        #[arg(long = "Q")]
        scale: String,
        /// Emit the full result as JSON instead of a summary
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the chain recurrence: solve, evolve, write snapshots.
    Chain {
        #[arg(long = "N")]
        sites: usize,
        #[arg(long = "Q")]
        scale: String,
        /// Site carrying the initial displacement and momentum (1-based)
        #[arg(long)]
        k: usize,
        /// Comma-separated times: "Tpr", "Tpr-200", "Tpr+3", or plain values
        #[arg(long, default_value = "Tpr-200,Tpr-3,Tpr,Tpr+3")]
        snapshots: String,
        /// Output directory for snapshot CSVs and the report
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep Q values and fit the error scaling law.
    Scaling {
        #[arg(long = "N")]
        sites: usize,
        /// Geometric grid "1e20:1e40:21" (endpoints must be powers of ten)
        #[arg(long = "Q-range")]
        q_range: String,
        /// CSV output path (the JSON summary goes to stdout)
        #[arg(long)]
        out: PathBuf,
    },
    /// Hunt for t with the cosine sum within epsilon of its maximum.
    Hunt {
        #[arg(long)]
        epsilon: String,
        /// Comma-separated square-free integers
        #[arg(long, default_value = "2,3,5")]
        roots: String,
    },
    /// Detect integer relations among a list of values.
    Relations {
        #[arg(long)]
        values: String,
        #[arg(long, default_value = "1e-30")]
        threshold: String,
        #[arg(long = "coeff-bound", default_value = "1000000")]
        coeff_bound: String,
    },
    /// Verified quantum recurrence time for a spectrum file.
    Quantum {
        /// JSON file with energies and complex amplitudes
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        epsilon: String,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let digits = match eval_digits_from_env() {
        Ok(d) => d,
        Err(e) => return report_error(&e),
    };
    match dispatch(cli.command, digits) {
        Ok(()) => 0,
        Err(e) => report_error(&e),
    }
}

fn eval_digits_from_env() -> Result<u32> {
    match std::env::var("RECLAB_DIGITS") {
        Err(_) => Ok(DEFAULT_DIGITS),
        Ok(s) => {
            let d: u32 = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("RECLAB_DIGITS: bad value '{}'", s)))?;
            if (30..=100_000).contains(&d) {
                Ok(d)
            } else {
                Err(Error::InvalidInput(
                    "RECLAB_DIGITS must lie in 30..=100000".into(),
                ))
            }
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn report_error(e: &Error) -> i32 {
    let (kind, code) = match e {
        Error::Parse { .. } => ("parse", 2),
        Error::AmbiguousRounding { .. } => ("ambiguous-rounding", 3),
        Error::InsufficientPrecision { .. } => ("insufficient-precision", 3),
        Error::VerificationFailed { .. } => ("verification-failed", 4),
        Error::SingularBasis => ("singular-basis", 1),
        Error::NonSquareBasis { .. } => ("non-square-basis", 1),
        Error::InvalidDelta { .. } => ("invalid-delta", 1),
        Error::NoUsableVector => ("no-usable-vector", 1),
        Error::NotFound { .. } => ("not-found", 1),
        Error::DimensionMismatch { .. } => ("dimension-mismatch", 1),
        Error::IndexOutOfRange { .. } => ("index-out-of-range", 1),
        Error::DegenerateFit(_) => ("degenerate-fit", 1),
        Error::InvalidInput(_) => ("invalid-input", 1),
        Error::Io(_) => ("io", 1),
    };
    let body = serde_json::json!({ "error": ErrorBody { kind, message: e.to_string() } });
    eprintln!("{}", body);
    code
}

/// Parse a Q value exactly: plain digits or mantissa-exponent shorthand
/// like `1e35`, never through floating point.
pub fn parse_exact_bigint(s: &str) -> Result<BigInt> {
    let v: HPReal = s
        .parse()
        .map_err(|_| Error::parse(0, format!("exact integer, got '{}'", s)))?;
    if !v.is_exact() {
        return Err(Error::parse(0, "integer without precision annotation"));
    }
    let rounded = v.round_nearest()?;
    if HPReal::from_bigint(rounded.clone()) != v {
        return Err(Error::parse(0, format!("integral value, got '{}'", s)));
    }
    Ok(rounded)
}

/// Geometric Q grid "1e20:1e40:21". Endpoints must be powers of ten; the
/// intermediate exponents are exact rationals and each Q is
/// `floor(10^{p/q})` computed by integer roots.
pub fn parse_q_range(s: &str) -> Result<Vec<BigInt>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::parse(0, "Q-range of the form start:end:count"));
    }
    let exp_of = |t: &str| -> Result<u64> {
        let v = parse_exact_bigint(t)?;
        let d = digits10(&v);
        if d == 0 || v != pow10(d - 1) {
            return Err(Error::parse(
                0,
                format!("power-of-ten endpoint like 1e20, got '{}'", t),
            ));
        }
        Ok(d - 1)
    };
    let e0 = exp_of(parts[0])?;
    let e1 = exp_of(parts[1])?;
    let count: u64 = parts[2]
        .parse()
        .map_err(|_| Error::parse(0, "sample count"))?;
    if count < 2 || e1 <= e0 {
        return Err(Error::parse(0, "ascending range with count >= 2"));
    }
    let span = e1 - e0;
    let den = count - 1;
    let mut out = Vec::with_capacity(count as usize);
    for j in 0..count {
        // exponent e0 + j*span/den as an exact rational p/q
        let num = e0 * den + j * span;
        let (whole, rem) = num.div_rem(&den);
        let q = if rem == 0 {
            pow10(whole)
        } else {
            // floor(10^{whole + rem/den}) = floor((10^{whole*den + rem})^{1/den})
            pow10(whole * den + rem).nth_root(den as u32)
        };
        out.push(q);
    }
    out.dedup();
    Ok(out)
}

/// A requested snapshot time.
#[derive(Debug, Clone, PartialEq)]
pub enum SnapshotTime {
    /// Offset relative to the recurrence time, e.g. `Tpr-200`.
    RelativeToRecurrence(HPReal),
    /// An absolute time value.
    Absolute(HPReal),
}

pub fn parse_snapshot_list(s: &str) -> Result<Vec<(String, SnapshotTime)>> {
    let mut out = Vec::new();
    for (i, raw) in s.split(',').enumerate() {
        let token = raw.trim();
        if token.is_empty() {
            return Err(Error::parse(i, "snapshot token"));
        }
        let time = if let Some(rest) = token.strip_prefix("Tpr") {
            if rest.is_empty() {
                SnapshotTime::RelativeToRecurrence(HPReal::zero())
            } else {
                let offset: HPReal = rest.parse().map_err(|_| {
                    Error::parse(i, format!("offset like +3 or -200, got '{}'", rest))
                })?;
                SnapshotTime::RelativeToRecurrence(offset)
            }
        } else {
            let t: HPReal = token
                .parse()
                .map_err(|_| Error::parse(i, format!("time value, got '{}'", token)))?;
            SnapshotTime::Absolute(t)
        };
        out.push((token.to_string(), time));
    }
    Ok(out)
}

fn dispatch(command: Command, digits: u32) -> Result<()> {
    match command {
        Command::Approx {
            alphas,
            scale,
            json,
        } => cmd_approx(&alphas, &scale, json, digits),
        Command::Chain {
            sites,
            scale,
            k,
            snapshots,
            out,
        } => cmd_chain(sites, &scale, k, &snapshots, &out, digits),
        Command::Scaling {
            sites,
            q_range,
            out,
        } => cmd_scaling(sites, &q_range, &out),
        Command::Hunt { epsilon, roots } => cmd_hunt(&epsilon, &roots, digits),
        Command::Relations {
            values,
            threshold,
            coeff_bound,
        } => cmd_relations(&values, &threshold, &coeff_bound, digits),
        Command::Quantum { spectrum, epsilon } => cmd_quantum(&spectrum, &epsilon, digits),
    }
}

fn cmd_approx(alphas: &str, scale: &str, json: bool, digits: u32) -> Result<()> {
    let scale = parse_exact_bigint(scale)?;
    let spec = AlphaSpec::parse(alphas)?;
    let values = spec.resolve(alpha_digits(&scale, digits))?;
    let problem = ApproximationProblem::new(values, scale)?;
    let result = diophantine::solve(&problem)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&result)?);
    } else {
        println!("q = {}", result.q);
        println!("p = [{}]", join_bigints(&result.p));
        println!("error = {}", result.error);
        println!(
            "q_bound = {} ({})",
            result.q_bound,
            check_mark(
                HPReal::from_bigint(result.q.clone())
                    .value_cmp(&result.q_bound.upper_bound_value())
                    != std::cmp::Ordering::Greater
            )
        );
        println!(
            "error_bound = {} ({})",
            result.error_bound,
            check_mark(
                result
                    .error
                    .value_cmp(&result.error_bound.upper_bound_value())
                    != std::cmp::Ordering::Greater
            )
        );
        println!(
            "note = reduced bases are reduction-order dependent; any q within the bounds is a valid witness"
        );
    }
    Ok(())
}

fn check_mark(ok: bool) -> &'static str {
    if ok {
        "satisfied"
    } else {
        "VIOLATED"
    }
}

fn join_bigints(v: &[BigInt]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Serialize)]
struct SnapshotReport {
    label: String,
    deviation_from_initial: HPReal,
    file: String,
}

#[derive(Serialize)]
struct ChainReport {
    sites: usize,
    displaced_site: usize,
    #[serde(with = "crate::precision::bigint_string")]
    scale: BigInt,
    #[serde(with = "crate::precision::bigint_string")]
    q: BigInt,
    error: HPReal,
    recurrence_time: HPReal,
    snapshots: Vec<SnapshotReport>,
}

fn write_snapshot_csv(path: &Path, state: &ChainState) -> Result<()> {
    let mut text = String::from("# reclab snapshot v1\nsite,x,p\n");
    for (i, (x, p)) in state.x.iter().zip(&state.p).enumerate() {
        text.push_str(&format!("{},{},{}\n", i + 1, x, p));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_chain(
    sites: usize,
    scale: &str,
    k: usize,
    snapshots: &str,
    out: &Path,
    digits: u32,
) -> Result<()> {
    let scale = parse_exact_bigint(scale)?;
    let snapshot_times = parse_snapshot_list(snapshots)?;
    std::fs::create_dir_all(out)?;

    let alphas = chain::frequency_ratios(sites, alpha_digits(&scale, digits))?;
    let problem = ApproximationProblem::new(alphas, scale.clone())?;
    let sol = diophantine::solve(&problem)?;

    let model = ChainModel::new(sites)?;
    let initial = model.localized_initial_state(k)?;
    let t_pr = model.recurrence_time(&sol.q, 40)?;

    let mut reports = Vec::new();
    for (label, time) in &snapshot_times {
        let state = match time {
            SnapshotTime::RelativeToRecurrence(offset) => {
                model.evolve_recurrence(&initial, &sol.q, offset)?
            }
            SnapshotTime::Absolute(t) => model.evolve(&initial, t)?,
        };
        let file = format!("snapshot_{}.csv", label);
        write_snapshot_csv(&out.join(&file), &state)?;
        reports.push(SnapshotReport {
            label: label.clone(),
            deviation_from_initial: chain::deviation(&initial, &state)?,
            file,
        });
    }

    let report = ChainReport {
        sites,
        displaced_site: k,
        scale,
        q: sol.q,
        error: sol.error,
        recurrence_time: t_pr,
        snapshots: reports,
    };
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(out.join("report.json"), &json)?;
    println!("{}", json);
    Ok(())
}

#[derive(Serialize)]
struct ScalingSummary {
    sites: usize,
    samples: usize,
    slope: HPReal,
    predicted: String,
    residual: HPReal,
    relations_found: usize,
}

fn write_scaling_csv(path: &Path, run: &ScalingRun) -> Result<()> {
    let mut text = String::from("# reclab scaling v1\nQ,q,error,log10_q,log10_inv_error\n");
    for s in &run.samples {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            s.scale, s.q, s.error, s.log10_q, s.log10_inv_error
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_scaling(sites: usize, q_range: &str, out: &Path) -> Result<()> {
    let scales = parse_q_range(q_range)?;
    let run = experiments::scaling_sweep(sites, &scales)?;
    write_scaling_csv(out, &run)?;
    let summary = ScalingSummary {
        sites: run.sites,
        samples: run.samples.len(),
        slope: run.fitted_slope.clone(),
        predicted: run.predicted_slope.to_string(),
        residual: run.relative_residual()?,
        relations_found: run.relations_found,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn parse_roots(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(0, format!("integer root, got '{}'", t)))
        })
        .collect()
}

fn cmd_hunt(epsilon: &str, roots: &str, digits: u32) -> Result<()> {
    let epsilon: HPReal = epsilon
        .parse()
        .map_err(|_| Error::parse(0, format!("epsilon value, got '{}'", epsilon)))?;
    let roots = parse_roots(roots)?;
    let witness = experiments::h_challenge(&epsilon, &roots, digits)?;
    println!("{}", serde_json::to_string_pretty(&witness)?);
    Ok(())
}

fn cmd_relations(values: &str, threshold: &str, coeff_bound: &str, digits: u32) -> Result<()> {
    let threshold: HPReal = threshold
        .parse()
        .map_err(|_| Error::parse(0, format!("threshold value, got '{}'", threshold)))?;
    let bound = parse_exact_bigint(coeff_bound)?;
    if !bound.is_positive() || bound.is_zero() {
        return Err(Error::InvalidInput("coeff bound must be positive".into()));
    }
    // relation scans need headroom below the threshold
    let needed = (-threshold.mag_exp().unwrap_or(-30)).max(1) as u32 + 40;
    let spec = AlphaSpec::parse(values)?;
    let vals = spec.resolve(digits.max(needed))?;
    match diophantine::find_integer_relation(&vals, &threshold, &bound)? {
        Some(rel) => println!("{}", serde_json::to_string_pretty(&rel)?),
        None => println!("{}", serde_json::json!({ "relation": null })),
    }
    Ok(())
}

fn cmd_quantum(spectrum: &Path, epsilon: &str, digits: u32) -> Result<()> {
    let epsilon: HPReal = epsilon
        .parse()
        .map_err(|_| Error::parse(0, format!("epsilon value, got '{}'", epsilon)))?;
    let text = std::fs::read_to_string(spectrum)?;
    let raw: QuantumSpectrum = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("spectrum file: {}", e)))?;
    // revalidate through the constructor
    let spec = QuantumSpectrum::new(raw.energies, raw.amplitudes)?;
    let rec = experiments::quantum_recurrence(&spec, &epsilon, digits)?;
    println!("{}", serde_json::to_string_pretty(&rec)?);
    Ok(())
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
