//! The `cis` command-line front end.
//!
//! Every subcommand reads JSON in the sequence schema
//! `{"n_min": <int>, "values": [...]}` and writes a JSON report (or CSV for
//! traces and line scans) to stdout or `--output`. Exit codes: 0 on success,
//! 2 on invalid input, 3 on numeric failure or non-convergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combmap::{certify, synthesize, BranchTrackedLog, CertifyOptions, SynthesisProblem};
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::muckenhoupt::{
    continuous_a2_scan, discrete_ratio, dyadic_lengths, grid, power_law_sequence, MuckenhouptReport,
    PositiveSequence, SignedCriticalSequence,
};
use crate::paleywiener::{norm_equivalence_check, riesz_bounds, InterpolationProblem};
use crate::sequence::{density, kadets_check, relative_density_check, separation, IndexedSequence};
use crate::genfun::WeightTrace;

#[derive(Debug, Parser)]
#[command(name = "cis", version, about = "Complete interpolating sequences: diagnostics and synthesis")]
pub struct RunConfig {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Separation, Kadets, density and relative-density statistics.
    Analyze(AnalyzeArgs),
    /// Discrete (A_p) ratio of a weight sequence, or a continuous (A_2) scan.
    Muckenhoupt(MuckenhouptArgs),
    /// Generating-function evaluations and diagnostics.
    Genfun(GenfunArgs),
    /// Boundary trace of phi = log F as CSV `gap,x,re_phi,im_phi`.
    Trace(TraceArgs),
    /// Nodes from prescribed critical values.
    Synthesize(SynthesizeArgs),
    /// Composite certificate for a node window.
    Certify(CertifyArgs),
    /// Evaluate the interpolating function of node data.
    Interpolate(InterpolateArgs),
    /// Finite-section Riesz bounds from the Gram matrix.
    FrameBounds(FrameBoundsArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Density window half-length (default: a quarter of the span).
    #[arg(long)]
    pub r: Option<f64>,
    /// Radius of the relative-density check.
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MuckenhouptArgs {
    /// Weight sequence `d_n` (sequence schema, positive values).
    #[arg(long, conflicts_with_all = ["alpha", "continuous"])]
    pub input: Option<PathBuf>,
    /// Power-law weights `(1 + |n|)^{2 alpha}` on `[-range, range]`.
    #[arg(long, requires = "range", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub range: Option<i64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Longest window scanned (default: the whole sequence).
    #[arg(long)]
    pub window_cap: Option<usize>,
    /// The growth check compares the whole window with the centred window
    /// shortened by this factor.
    #[arg(long, default_value_t = 100.0)]
    pub shrink: f64,
    #[arg(long, default_value_t = 1.5)]
    pub growth_threshold: f64,
    /// Continuous (A_2) scan of `|F(x + iy)|^2` instead of a discrete one.
    #[arg(long)]
    pub continuous: bool,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    pub k_min: i32,
    #[arg(long, default_value_t = 6, allow_hyphen_values = true)]
    pub k_max: i32,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub center_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub center_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub center_step: f64,
}

/// Generating function source: the sine when `--nodes` is absent.
#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Node window; uses the sine-tail form when the window allows it.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Force the symmetric product truncated at this radius.
    #[arg(long, requires = "nodes")]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub normalization: f64,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    #[command(subcommand)]
    pub op: GenfunOp,
    #[command(flatten)]
    pub function: FunctionArgs,
}

#[derive(Debug, Subcommand)]
pub enum GenfunOp {
    /// `F(z)` at each `--z` ("a+bi").
    Eval {
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Critical points and values on gaps `lo..=hi`.
    CriticalData {
        #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        hi: i64,
    },
    /// `d_n = |F'(lambda_n)|^2` on `lo..=hi`.
    Derivatives {
        #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        hi: i64,
    },
    /// `log|F(iR)|/R` for increasing radii.
    TypeEstimate {
        #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
        radii: Vec<f64>,
    },
    /// Cartwright integral over `[-T, T]`.
    Cartwright {
        #[arg(long = "t", default_value_t = 100.0)]
        t: f64,
    },
    /// CSV `x,abs_F` along the line `Im z = y`.
    LineScan {
        #[command(flatten)]
        line: LineArgs,
    },
    /// Extremes of `|F(x + iy)|` on the sampled line.
    LineBounds {
        #[command(flatten)]
        line: LineArgs,
    },
}

#[derive(Debug, Args)]
pub struct LineArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    pub lo: i64,
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    pub hi: i64,
    /// Also write the per-gap summary (levels, maxima) as JSON here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// Target critical values on `[-N, N]` (sequence schema).
    #[arg(long)]
    pub targets: PathBuf,
    /// Read the values as moduli `|c_n|` and apply the signs `(-1)^n`.
    #[arg(long)]
    pub moduli: bool,
    /// Use only the targets on `[-N, N]`.
    #[arg(long)]
    pub half_width: Option<i64>,
    #[arg(long, default_value_t = 1.0 / std::f64::consts::PI)]
    pub tail_value: f64,
    #[arg(long, default_value_t = 4)]
    pub padding: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub residual_tol: f64,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub window_cap: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub density_tol: f64,
    #[arg(long, default_value_t = 1.25)]
    pub growth_threshold: f64,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long)]
    pub nodes: PathBuf,
    /// Data `a_n` (sequence schema; reals or `[re, im]` pairs).
    #[arg(long)]
    pub data: PathBuf,
    /// Evaluation points "a+bi".
    #[arg(long = "z", allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Compare `sum |a_n|^2` with the integral of `|f|^2` over `[-T, T]`.
    #[arg(long, value_name = "T")]
    pub check_norm: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FrameBoundsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Odd section size (default: the largest odd size that fits).
    #[arg(long)]
    pub size: Option<usize>,
}

enum Emit {
    Json(String),
    Csv(String),
}

fn json<T: Serialize>(value: &T) -> Result<Emit> {
    serde_json::to_string_pretty(value)
        .map(|s| Emit::Json(s + "\n"))
        .map_err(|e| Error::numeric(format!("cannot serialise report: {e}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// Parses "a+bi", "a-bi", "a", "bi", "i", "-i" (whitespace ignored).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::invalid(format!("cannot parse complex number {text:?} (expected a+bi)"));
    if s.is_empty() {
        return Err(bad());
    }
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
        None => (0.0, num(body)?),
    };
    let z = Complex64::new(re, im);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Deserialize)]
struct DataFile {
    n_min: i64,
    values: Vec<Scalar>,
}

impl FunctionArgs {
    fn build(&self) -> Result<GeneratingFunction> {
        let f = match &self.nodes {
            None => GeneratingFunction::sine(),
            Some(path) => {
                let nodes: IndexedSequence = read_json(path)?;
                match self.radius {
                    Some(r) => GeneratingFunction::symmetric_product(&nodes, r)?,
                    None => GeneratingFunction::from_window(&nodes)?,
                }
            }
        };
        f.with_normalization(self.normalization)
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    n_min: i64,
    n_max: i64,
    separation: crate::sequence::SeparationReport,
    kadets: crate::sequence::KadetsReport,
    density: crate::sequence::DensityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    relatively_dense: Option<RelativeDensity>,
}

#[derive(Serialize)]
struct RelativeDensity {
    eps: f64,
    holds: bool,
}

#[derive(Serialize)]
struct DiscreteCliReport {
    report: MuckenhouptReport,
    sub_report: MuckenhouptReport,
    growth: f64,
    growing: bool,
}

fn analyze(a: &AnalyzeArgs) -> Result<Emit> {
    let seq: IndexedSequence = read_json(&a.input)?;
    let r = a.r.unwrap_or(seq.span() / 4.0);
    let relatively_dense = match a.eps {
        Some(eps) if !(eps > 0.0) => return Err(Error::invalid("eps must be positive")),
        Some(eps) => Some(RelativeDensity {
            eps,
            holds: relative_density_check(&seq, eps),
        }),
        None => None,
    };
    json(&AnalyzeReport {
        n_min: seq.n_min(),
        n_max: seq.n_max(),
        separation: separation(&seq),
        kadets: kadets_check(&seq),
        density: density(&seq, r)?,
        relatively_dense,
    })
}

fn muckenhoupt(a: &MuckenhouptArgs) -> Result<Emit> {
    if a.continuous {
        let f = a.function.build()?;
        let w = WeightTrace::new(f, a.y)?;
        if a.k_min > a.k_max {
            return Err(Error::invalid("k_min must not exceed k_max"));
        }
        if !(a.center_step > 0.0) || a.center_max < a.center_min {
            return Err(Error::invalid("invalid centre grid"));
        }
        let lengths = dyadic_lengths(a.k_min, a.k_max);
        let centers = grid(a.center_min, a.center_max, a.center_step);
        return json(&continuous_a2_scan(&w, &lengths, &centers)?);
    }
    let d: PositiveSequence = match (&a.input, a.alpha, a.range) {
        (Some(path), _, _) => read_json(path)?,
        (None, Some(alpha), Some(m)) => {
            if m < 1 {
                return Err(Error::invalid("range must be at least 1"));
            }
            power_law_sequence(alpha, -m, m)?
        }
        _ => return Err(Error::invalid("give --input, or --alpha with --range, or --continuous")),
    };
    if !(a.shrink > 1.0) {
        return Err(Error::invalid("shrink must exceed 1"));
    }
    let cap = a.window_cap.unwrap_or(d.len());
    let report = discrete_ratio(&d, a.p, cap)?;
    let sub_len = ((d.len() as f64 / a.shrink).round() as usize).max(1);
    let lo = d.n_min() + ((d.len() - sub_len) / 2) as i64;
    let sub = d.slice(lo, lo + sub_len as i64 - 1)?;
    let sub_report = discrete_ratio(&sub, a.p, cap.min(sub_len))?;
    let growth = report.max_ratio / sub_report.max_ratio;
    json(&DiscreteCliReport {
        report,
        sub_report,
        growth,
        growing: growth >= a.growth_threshold,
    })
}

#[derive(Serialize)]
struct EvalPoint {
    z: Complex64,
    value: Complex64,
}

#[derive(Serialize)]
struct TypeEstimateReport {
    radii: Vec<f64>,
    estimates: Vec<f64>,
}

#[derive(Serialize)]
struct CartwrightReport {
    t: f64,
    integral: f64,
}

fn genfun(a: &GenfunArgs) -> Result<Emit> {
    let f = a.function.build()?;
    match &a.op {
        GenfunOp::Eval { z } => {
            let points = z
                .iter()
                .map(|s| {
                    let z = parse_complex(s)?;
                    Ok(EvalPoint { z, value: f.eval(z)? })
                })
                .collect::<Result<Vec<_>>>()?;
            json(&points)
        }
        GenfunOp::CriticalData { lo, hi } => json(&f.critical_data(*lo, *hi)?),
        GenfunOp::Derivatives { lo, hi } => json(&f.derivative_at_zeros(*lo, *hi)?),
        GenfunOp::TypeEstimate { radii } => json(&TypeEstimateReport {
            estimates: f.type_estimate(radii)?,
            radii: radii.clone(),
        }),
        GenfunOp::Cartwright { t } => json(&CartwrightReport {
            t: *t,
            integral: f.cartwright_integral(*t)?,
        }),
        GenfunOp::LineScan { line } => {
            let rows = f.line_scan(line.y, (line.x_min, line.x_max), line.step)?;
            let mut out = String::from("x,abs_F\n");
            for (x, v) in rows {
                out.push_str(&format!("{x:?},{v:?}\n"));
            }
            Ok(Emit::Csv(out))
        }
        GenfunOp::LineBounds { line } => json(&f.line_modulus_bounds(line.y, (line.x_min, line.x_max), line.step)?),
    }
}

fn trace(a: &TraceArgs) -> Result<Emit> {
    let l = BranchTrackedLog::new(a.function.build()?)?;
    let tr = l.boundary_trace(a.eps, a.lo, a.hi)?;
    if let Some(path) = &a.summary {
        let Emit::Json(s) = json(&tr.gaps)? else { unreachable!() };
        std::fs::write(path, s).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Emit::Csv(tr.to_csv()))
}

fn synthesize_cmd(a: &SynthesizeArgs) -> Result<(Emit, Option<Error>)> {
    let raw: DataFile = read_json(&a.targets)?;
    let values = raw
        .values
        .iter()
        .map(|v| match v {
            Scalar::Real(x) => Ok(*x),
            Scalar::Complex(_) => Err(Error::invalid("targets must be real")),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut targets = if a.moduli {
        SignedCriticalSequence::from_moduli(raw.n_min, &values)?
    } else {
        SignedCriticalSequence::new(raw.n_min, values)?
    };
    if let Some(n) = a.half_width {
        if n < 0 || targets.get(-n).is_none() || targets.get(n).is_none() {
            return Err(Error::invalid(format!("targets do not cover [-{n}, {n}]")));
        }
        let lo = (-n - targets.n_min()) as usize;
        targets = SignedCriticalSequence::new(-n, targets.values()[lo..lo + (2 * n + 1) as usize].to_vec())?;
    }
    let problem = SynthesisProblem {
        tail_value: a.tail_value,
        padding: a.padding,
        max_iter: a.max_iter,
        residual_tol: a.residual_tol,
        ..SynthesisProblem::new(targets)?
    };
    match synthesize(&problem) {
        Ok(s) => Ok((json(&s)?, None)),
        Err(Error::NotConverged { best }) => {
            let emit = json(&*best)?;
            Ok((emit, Some(Error::NotConverged { best })))
        }
        Err(e) => Err(e),
    }
}

fn certify_cmd(a: &CertifyArgs) -> Result<Emit> {
    let nodes: IndexedSequence = read_json(&a.input)?;
    let opts = CertifyOptions {
        window_cap: a.window_cap,
        density_tol: a.density_tol,
        growth_threshold: a.growth_threshold,
        ..CertifyOptions::default()
    };
    if a.window_cap == Some(0) {
        return Err(Error::invalid("window_cap must be at least 1"));
    }
    json(&certify(&nodes, &opts)?)
}

#[derive(Serialize)]
struct InterpolateReport {
    points: Vec<EvalPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<crate::paleywiener::NormEquivalence>,
}

fn interpolate(a: &InterpolateArgs) -> Result<Emit> {
    let nodes: IndexedSequence = read_json(&a.nodes)?;
    let raw: DataFile = read_json(&a.data)?;
    if raw.n_min != nodes.n_min() {
        return Err(Error::invalid(format!(
            "data n_min = {} does not match nodes n_min = {}",
            raw.n_min,
            nodes.n_min()
        )));
    }
    let data = raw
        .values
        .iter()
        .map(|v| match *v {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    let problem = InterpolationProblem::new(nodes, data)?;
    let points = a
        .z
        .iter()
        .map(|s| {
            let z = parse_complex(s)?;
            Ok(EvalPoint { z, value: problem.eval(z)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = a.check_norm.map(|t| norm_equivalence_check(&problem, t)).transpose()?;
    json(&InterpolateReport { points, norm })
}

fn frame_bounds(a: &FrameBoundsArgs) -> Result<Emit> {
    let nodes: IndexedSequence = read_json(&a.input)?;
    let size = a.size.unwrap_or(if nodes.len() % 2 == 1 { nodes.len() } else { nodes.len() - 1 });
    json(&riesz_bounds(&nodes, size)?)
}

fn execute(cfg: &RunConfig) -> Result<(Emit, Option<Error>)> {
    let emit = match &cfg.command {
        Command::Analyze(a) => analyze(a)?,
        Command::Muckenhoupt(a) => muckenhoupt(a)?,
        Command::Genfun(a) => genfun(a)?,
        Command::Trace(a) => trace(a)?,
        Command::Synthesize(a) => return synthesize_cmd(a),
        Command::Certify(a) => certify_cmd(a)?,
        Command::Interpolate(a) => interpolate(a)?,
        Command::FrameBounds(a) => frame_bounds(a)?,
    };
    Ok((emit, None))
}

fn exit_code(e: &Error) -> i32 {
    if e.is_invalid_input() {
        2
    } else {
        3
    }
}

fn write_out(cfg: &RunConfig, emit: Emit) -> Result<()> {
    let text = match emit {
        Emit::Json(s) | Emit::Csv(s) => s,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::numeric(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: invalid arguments"));
            return 2;
        }
    };
    let result = execute(&cfg).and_then(|(emit, pending)| {
        write_out(&cfg, emit)?;
        pending.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
