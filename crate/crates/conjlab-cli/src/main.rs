//! Command line front end for the conjlab toolkit: exact series values and
//! 2-adic digits, trajectories, engineered words with slope and gap-ratio
//! analysis, 3-adic output chains, slope sweeps, and term statistics.
//!
//! Output is plain key = value text by default; `--format json` emits one
//! JSON object per run and `--format csv` a versioned table. Exit code 0 is
//! success, 2 a precision or resolution budget failure, 3 invalid input;
//! failures print one JSON error object to stderr.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use conjlab_core::analysis::{
    christoffel_mu_bound, cone_limits, distribution_check, means, ratio_criterion, sigma_perm,
    slope_stats, CriterionVerdict, RatioReport, SlopeReport, SlopeVerdict,
};
use conjlab_core::conjugacy::{
    parity_vector, phi_finite, phi_limit_estimate, phi_partials, pseudo_trajectory, trajectory,
    EstimateParams, LimitEstimate,
};
use conjlab_core::error::Error as CoreError;
use conjlab_core::exactnum::{
    compare_pow, parse_rational, rat, rational_to_f64, AlphaKind, AlphaOracle, Rational,
};
use conjlab_core::padic::{convergent_cuts, output_3adic, phi_2adic, three_adic_row};
use conjlab_core::sturmian::{
    construct_word, sturmian_stream, ConstructorConfig, FactorLog, RunFamily, RunShape,
    SturmianVariant,
};
use conjlab_core::words::{FiniteWord, WordStream};

const CSV_VERSION: &str = "# conjugacy-lab v1\n";

#[derive(Parser)]
#[command(
    name = "conjlab",
    version,
    about = "Exact arithmetic for the 3x+1 conjugacy: series, words, trajectories, statistics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Series value of a word: partial sums, 2-adic digits, limit estimates.
    Phi(PhiArgs),
    /// Exact trajectory of a rational, or a pseudo-trajectory along a word.
    Trajectory(TrajectoryArgs),
    /// Engineer a word factor by factor and optionally analyze it.
    Construct(ConstructArgs),
    /// 3-adic output digits along prefix cuts, or the prefix summary table.
    #[command(name = "3adic")]
    ThreeAdic(ThreeAdicArgs),
    /// Series estimates for engineered words over a list of slopes.
    SweepAlpha(SweepArgs),
    /// Term statistics, rank permutations, mean bands, and cone ratios.
    Stats(StatsArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).args(["sturmian", "word", "rational"]))]
struct SourceArgs {
    /// Upper mechanical word of this slope: ln2, ln2ln3, golden, or a
    /// rational in (0,1).
    #[arg(long, value_name = "SLOPE")]
    sturmian: Option<String>,
    /// Explicit finite word, plain digits ("100101") or run-length tokens
    /// ("1^4 0^2 1").
    #[arg(long, value_name = "BITS")]
    word: Option<String>,
    /// Rational with odd denominator; the word is its parity vector
    /// (needs --depth).
    #[arg(long, value_name = "NUM/DEN", allow_hyphen_values = true)]
    rational: Option<String>,
}

#[derive(Args)]
struct PhiArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Prefix length for partial sums; for --rational, the parity vector
    /// length.
    #[arg(long, value_name = "N")]
    depth: Option<u64>,
    /// Also print the first N 2-adic digits and residues of the value.
    #[arg(long, value_name = "N")]
    padic2: Option<u32>,
    /// Certified limit estimate: scan until the next term drops below EPS.
    #[arg(long, value_name = "EPS")]
    estimate: Option<String>,
    /// Height floor backing the certified tail bound, e.g. 0.69.
    #[arg(long, value_name = "R")]
    slope_floor: Option<String>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Start value for pseudo-trajectories along a word source.
    #[arg(long, value_name = "NUM/DEN", allow_hyphen_values = true)]
    x: Option<String>,
    /// Number of map applications.
    #[arg(long, value_name = "N")]
    steps: u64,
}

#[derive(Args)]
struct ConstructArgs {
    /// Slope oracle: ln2, ln2ln3, golden, or a rational in (0,1).
    #[arg(long, value_name = "SLOPE")]
    alpha: String,
    /// Zero-run family: identity, deficit:C/D, power:B, or poly:C0,C1,...
    #[arg(long, default_value = "identity", value_name = "FAMILY")]
    family: String,
    /// Run order inside each factor.
    #[arg(long, value_enum, default_value_t = ShapeArg::ZerosFirst)]
    shape: ShapeArg,
    /// Number of factors to emit.
    #[arg(long, value_name = "N")]
    top: u64,
    /// Attach an analysis report over the constructed word.
    #[arg(long, value_enum)]
    analyze: Option<AnalyzeKind>,
    /// Scan window for --analyze; defaults to the full word.
    #[arg(long, value_name = "N")]
    window: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    ZerosFirst,
    OnesFirst,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AnalyzeKind {
    Slope,
    Ratio,
}

#[derive(Args)]
#[command(group = ArgGroup::new("cuts").required(true).args(["l_odd", "l_even", "l_list", "table"]))]
struct ThreeAdicArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Cut at odd-index convergent denominators up to index K
    /// (needs --sturmian).
    #[arg(long, value_name = "K")]
    l_odd: Option<usize>,
    /// Cut at even-index convergent denominators up to index K
    /// (needs --sturmian).
    #[arg(long, value_name = "K")]
    l_even: Option<usize>,
    /// Explicit ascending prefix cuts.
    #[arg(long, value_name = "L1,L2,...", value_delimiter = ',')]
    l_list: Option<Vec<u64>>,
    /// Prefix summary table for lengths 1..=LMAX: map value, cycle value,
    /// residue chain, digits.
    #[arg(long, value_name = "LMAX")]
    table: Option<u64>,
    /// Number of stabilized 3-adic digits to compute.
    #[arg(long, value_name = "N")]
    depth: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma separated slope list; every slope must lie strictly between
    /// ln2ln3 and 1. Empty list prints only the header.
    #[arg(long, default_value = "", value_name = "A1,A2,...")]
    alphas: String,
    /// Zero-run family for every sweep point.
    #[arg(long, default_value = "identity", value_name = "FAMILY")]
    family: String,
    /// Run order inside each factor.
    #[arg(long, value_enum, default_value_t = ShapeArg::ZerosFirst)]
    shape: ShapeArg,
    /// Factors per constructed word.
    #[arg(long, value_name = "N")]
    top: u64,
    /// Term-size stopping threshold for each estimate.
    #[arg(long, default_value = "1/1000000000", value_name = "EPS")]
    eps: String,
    /// Height floor backing certified tails.
    #[arg(long, value_name = "R")]
    slope_floor: Option<String>,
    /// Scan cap per estimate.
    #[arg(long, default_value_t = 200_000, value_name = "N")]
    max_depth: u64,
    /// Worker threads for independent sweep points.
    #[arg(long, default_value_t = 1, value_name = "N")]
    jobs: usize,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["means", "distribution", "sigma", "mu_bound", "cone"]))]
struct StatsArgs {
    /// Arithmetic and geometric means of the first M series terms.
    #[arg(long, value_name = "M")]
    means: Option<u64>,
    /// Frequency of terms inside [A,B] among the first M: A B M.
    #[arg(long, num_args = 3, value_names = ["A", "B", "M"])]
    distribution: Option<Vec<String>>,
    /// Rank permutation of the first p_K series terms and its reading order.
    #[arg(long, value_name = "K")]
    sigma: Option<usize>,
    /// Mean band location of the height-p_K standard word value.
    #[arg(long, value_name = "K")]
    mu_bound: Option<usize>,
    /// Map-at-zero to length ratios at convergent prefixes up to index K.
    #[arg(long, value_name = "K")]
    cone: Option<usize>,
    /// Shift for --cone ratios.
    #[arg(long, default_value = "0", value_name = "NUM/DEN", allow_hyphen_values = true)]
    x: String,
}

/// One failed run: the JSON error kind, its message, and the exit code.
struct Failure {
    kind: String,
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "usage".into(),
            message: message.into(),
            code: 3,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure {
            kind: e.kind().into(),
            message: e.to_string(),
            code: if e.is_budget() { 2 } else { 3 },
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprintln!("{}", error_json("usage", &e.to_string()));
                    ExitCode::from(3)
                }
            };
        }
    };
    let report = match run(&cli) {
        Ok(s) => s,
        Err(f) => {
            eprintln!("{}", error_json(&f.kind, &f.message));
            return ExitCode::from(f.code);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!(
                    "{}",
                    error_json("io", &format!("{}: {}", path.display(), e))
                );
                return ExitCode::from(3);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::SUCCESS
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.cmd {
        Cmd::Phi(a) => cmd_phi(a, cli.format),
        Cmd::Trajectory(a) => cmd_trajectory(a, cli.format),
        Cmd::Construct(a) => cmd_construct(a, cli.format),
        Cmd::ThreeAdic(a) => cmd_3adic(a, cli.format),
        Cmd::SweepAlpha(a) => cmd_sweep(a, cli.format),
        Cmd::Stats(a) => cmd_stats(a, cli.format),
    }
}

// ---------- shared parsing ----------

enum Source {
    Sturmian { spec: String, oracle: AlphaOracle },
    Word { word: FiniteWord },
    Rational { zeta: Rational },
}

fn resolve_source(s: &SourceArgs) -> Result<Source, Failure> {
    if let Some(spec) = &s.sturmian {
        return Ok(Source::Sturmian {
            spec: spec.trim().to_string(),
            oracle: parse_slope(spec)?,
        });
    }
    if let Some(bits) = &s.word {
        let word: FiniteWord = bits.parse().map_err(Failure::from)?;
        return Ok(Source::Word { word });
    }
    let zeta = parse_rat(s.rational.as_ref().expect("source group is required"))?;
    Ok(Source::Rational { zeta })
}

fn parse_slope(spec: &str) -> Result<AlphaOracle, Failure> {
    let s = spec.trim();
    Ok(match s {
        "ln2" => AlphaOracle::ln2(),
        "ln2ln3" | "ln2/ln3" => AlphaOracle::log2_over_log3(),
        "golden" => AlphaOracle::golden(),
        _ => {
            let r = parse_rational(s).map_err(|_| bad_slope(s))?;
            if r <= rat(0, 1) || r >= rat(1, 1) {
                return Err(bad_slope(s));
            }
            AlphaOracle::exact(r)
        }
    })
}

fn bad_slope(s: &str) -> Failure {
    Failure {
        kind: "invalid-slope".into(),
        message: format!("slope {s:?} is not ln2, ln2ln3, golden, or a rational in (0,1)"),
        code: 3,
    }
}

fn parse_family(spec: &str) -> Result<RunFamily, Failure> {
    let s = spec.trim();
    if s == "identity" {
        return Ok(RunFamily::Identity);
    }
    if let Some(rest) = s.strip_prefix("deficit:") {
        let (c, d) = rest.split_once('/').ok_or_else(|| bad_family(spec))?;
        let c: u64 = c.trim().parse().map_err(|_| bad_family(spec))?;
        let d: u64 = d.trim().parse().map_err(|_| bad_family(spec))?;
        if d == 0 || c >= d {
            return Err(bad_family(spec));
        }
        return Ok(RunFamily::Deficit { c, d });
    }
    if let Some(rest) = s.strip_prefix("power:") {
        let beta = parse_rational(rest).map_err(|_| bad_family(spec))?;
        if beta <= rat(1, 1) {
            return Err(bad_family(spec));
        }
        return Ok(RunFamily::PowerFloor { beta });
    }
    if let Some(rest) = s.strip_prefix("poly:") {
        let mut coeffs = Vec::new();
        for tok in rest.split(',') {
            coeffs.push(tok.trim().parse::<u64>().map_err(|_| bad_family(spec))?);
        }
        if coeffs.iter().all(|&c| c == 0) {
            return Err(bad_family(spec));
        }
        return Ok(RunFamily::Polynomial { coeffs });
    }
    Err(bad_family(spec))
}

fn bad_family(s: &str) -> Failure {
    Failure::usage(format!(
        "family {s:?} is not identity, deficit:C/D, power:B, or poly:C0,C1,..."
    ))
}

fn parse_rat(s: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(s)?)
}

fn shape_of(s: ShapeArg) -> RunShape {
    match s {
        ShapeArg::ZerosFirst => RunShape::ZerosFirst,
        ShapeArg::OnesFirst => RunShape::OnesFirst,
    }
}

fn shape_label(s: ShapeArg) -> &'static str {
    match s {
        ShapeArg::ZerosFirst => "zeros-first",
        ShapeArg::OnesFirst => "ones-first",
    }
}

/// Rejects sweep slopes outside the open interval (ln2ln3, 1).
fn ensure_staircase_slope(oracle: &AlphaOracle, spec: &str) -> Result<(), Failure> {
    let outside = || Failure {
        kind: "invalid-slope".into(),
        message: format!("slope {spec} lies outside the open interval (ln2ln3, 1)"),
        code: 3,
    };
    match oracle.kind() {
        AlphaKind::ExactRational(r) => {
            // p/q exceeds the critical slope exactly when 3^p > 2^q.
            match (r.numer().to_u64(), r.denom().to_u64()) {
                (Some(p), Some(q)) if p < q && compare_pow(q, p) == Ordering::Less => Ok(()),
                _ => Err(outside()),
            }
        }
        AlphaKind::LogRatio23 => Err(outside()),
        _ => {
            let critical = AlphaOracle::log2_over_log3();
            let one = rat(1, 1);
            let mut bits = 64u32;
            loop {
                let (alo, ahi) = oracle.enclosure_bits(bits);
                let (clo, chi) = critical.enclosure_bits(bits);
                if alo > chi && ahi < one {
                    return Ok(());
                }
                if ahi < clo {
                    return Err(outside());
                }
                if bits >= oracle.cap_bits() {
                    return Err(CoreError::PrecisionExhausted {
                        cap_bits: oracle.cap_bits(),
                    }
                    .into());
                }
                bits = bits.saturating_mul(2).min(oracle.cap_bits());
            }
        }
    }
}

// ---------- shared rendering ----------

fn dbl(x: f64) -> String {
    format!("{x:.16e}")
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key} = {value}");
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn tuple<T: std::fmt::Display>(items: &[T]) -> String {
    format!("({})", join(items.iter(), ","))
}

fn finish_json(obj: Map<String, Value>) -> String {
    let mut s = Value::Object(obj).to_string();
    s.push('\n');
    s
}

fn verdict_label(v: &CriterionVerdict) -> &'static str {
    match v {
        CriterionVerdict::ConvergentByCriterion => "convergent-by-criterion",
        CriterionVerdict::DivergentByCriterion => "divergent-by-criterion",
        CriterionVerdict::Inconclusive => "inconclusive",
    }
}

// ---------- phi ----------

fn cmd_phi(a: &PhiArgs, format: Format) -> Result<String, Failure> {
    let source = resolve_source(&a.source)?;

    if let Some(eps) = &a.estimate {
        let (stream, labels) = match &source {
            Source::Sturmian { spec, oracle } => (
                sturmian_stream(oracle, SturmianVariant::UpperC),
                vec![("alpha", spec.clone())],
            ),
            Source::Word { word } => (
                WordStream::from_word(word.clone()),
                vec![("word", word.to_string())],
            ),
            Source::Rational { .. } => {
                return Err(Failure::usage(
                    "--estimate applies to --sturmian or --word sources",
                ))
            }
        };
        let mut params = EstimateParams::new(parse_rat(eps)?, a.depth.unwrap_or(100_000));
        if let Some(floor) = &a.slope_floor {
            params = params.with_slope_floor(parse_rat(floor)?);
        }
        let est = phi_limit_estimate(&stream, &params)?;
        return Ok(render_estimate(&labels, &est, format));
    }

    let mut labels: Vec<(&str, String)> = Vec::new();
    let mut nums: Vec<(&str, u64)> = Vec::new();
    let mut exact_phi: Option<Rational> = None;
    let (stream, depth) = match &source {
        Source::Sturmian { spec, oracle } => {
            labels.push(("alpha", spec.clone()));
            if a.depth.is_none() && a.padic2.is_none() {
                return Err(Failure::usage(
                    "infinite sources need --depth, --padic2, or --estimate",
                ));
            }
            (sturmian_stream(oracle, SturmianVariant::UpperC), a.depth)
        }
        Source::Word { word } => {
            labels.push(("word", word.to_string()));
            nums.push(("l", word.len()));
            nums.push(("h", word.height()));
            exact_phi = Some(phi_finite(word));
            (WordStream::from_word(word.clone()), a.depth)
        }
        Source::Rational { zeta } => {
            let depth = a
                .depth
                .ok_or_else(|| Failure::usage("--rational needs --depth for the parity vector"))?;
            let word = parity_vector(zeta, depth)?;
            labels.push(("zeta", zeta.to_string()));
            labels.push(("word", word.to_string()));
            exact_phi = Some(phi_finite(&word));
            (WordStream::from_word(word), Some(depth))
        }
    };

    let partials = match depth {
        Some(d) => Some(phi_partials(&stream, d)?),
        None => None,
    };
    let expansion = match a.padic2 {
        Some(n) => Some(phi_2adic(&stream, n)?),
        None => None,
    };
    let shown_word = match (&source, depth) {
        (Source::Sturmian { .. }, Some(d)) => Some(stream.prefix(d)?.to_string()),
        _ => None,
    };

    match format {
        Format::Plain => {
            let mut out = String::new();
            for (k, v) in &labels {
                kv(&mut out, k, v);
            }
            for (k, v) in &nums {
                kv(&mut out, k, v);
            }
            if let Some(d) = depth {
                if matches!(source, Source::Sturmian { .. }) {
                    kv(&mut out, "depth", d);
                }
            }
            if let Some(w) = &shown_word {
                kv(&mut out, "word", w);
            }
            if let Some(phi) = &exact_phi {
                kv(&mut out, "phi", phi);
            }
            if let Some(ps) = &partials {
                for (i, p) in ps.iter().enumerate() {
                    let _ = writeln!(out, "partial[{}] = {}", i + 1, p);
                }
            }
            if let Some(e) = &expansion {
                kv(&mut out, "digits", e.digit_string());
                kv(
                    &mut out,
                    "residues",
                    join(e.residues.iter().map(|r| r.value.to_string()), ","),
                );
            }
            Ok(out)
        }
        Format::Json => {
            let mut o = Map::new();
            for (k, v) in &labels {
                o.insert((*k).into(), json!(v));
            }
            for (k, v) in &nums {
                o.insert((*k).into(), json!(v));
            }
            if let Some(d) = depth {
                o.insert("depth".into(), json!(d));
            }
            if let Some(w) = &shown_word {
                o.insert("word".into(), json!(w));
            }
            if let Some(phi) = &exact_phi {
                o.insert("phi".into(), json!(phi.to_string()));
            }
            if let Some(ps) = &partials {
                let vals: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                o.insert("partials".into(), json!(vals));
            }
            if let Some(e) = &expansion {
                let residues: Vec<String> =
                    e.residues.iter().map(|r| r.value.to_string()).collect();
                o.insert(
                    "padic2".into(),
                    json!({ "digits": e.digit_string(), "residues": residues }),
                );
            }
            Ok(finish_json(o))
        }
        Format::Csv => {
            let mut out = String::from(CSV_VERSION);
            let rows = partials.as_ref().map_or(0, |p| p.len() as u64).max(
                expansion
                    .as_ref()
                    .map_or(0, |e| e.digits.len() as u64),
            );
            if rows == 0 {
                out.push_str("key,value\n");
                for (k, v) in &labels {
                    let _ = writeln!(out, "{k},{v}");
                }
                for (k, v) in &nums {
                    let _ = writeln!(out, "{k},{v}");
                }
                if let Some(phi) = &exact_phi {
                    let _ = writeln!(out, "phi,{phi}");
                }
                return Ok(out);
            }
            out.push_str("i,partial,digit,residue\n");
            for i in 0..rows as usize {
                let partial = partials
                    .as_ref()
                    .and_then(|p| p.get(i))
                    .map_or(String::new(), |p| p.to_string());
                let (digit, residue) = expansion
                    .as_ref()
                    .filter(|e| i < e.digits.len())
                    .map_or((String::new(), String::new()), |e| {
                        (e.digits[i].to_string(), e.residues[i].value.to_string())
                    });
                let _ = writeln!(out, "{},{},{},{}", i + 1, partial, digit, residue);
            }
            Ok(out)
        }
    }
}

fn render_estimate(labels: &[(&str, String)], est: &LimitEstimate, format: Format) -> String {
    let value = rational_to_f64(&est.value);
    let tail = est.tail_bound.as_ref().map(rational_to_f64);
    match format {
        Format::Plain => {
            let mut out = String::new();
            for (k, v) in labels {
                kv(&mut out, k, v);
            }
            kv(&mut out, "estimate", dbl(value));
            kv(&mut out, "certified", est.certified);
            if let Some(t) = tail {
                kv(&mut out, "tail_bound", dbl(t));
            }
            kv(&mut out, "depth", est.depth);
            kv(&mut out, "terms", est.terms);
            if est.exact {
                kv(&mut out, "exact", true);
            }
            if est.divergence_suspected {
                kv(&mut out, "divergence_suspected", true);
            }
            out
        }
        Format::Json => {
            let mut o = Map::new();
            for (k, v) in labels {
                o.insert((*k).into(), json!(v));
            }
            o.insert(
                "estimate".into(),
                json!({
                    "value": value,
                    "certified": est.certified,
                    "tail_bound": tail,
                    "depth": est.depth,
                    "terms": est.terms,
                    "exact": est.exact,
                    "divergence_suspected": est.divergence_suspected,
                }),
            );
            finish_json(o)
        }
        Format::Csv => {
            let mut out = String::from(CSV_VERSION);
            out.push_str("key,value\n");
            for (k, v) in labels {
                let _ = writeln!(out, "{k},{v}");
            }
            let _ = writeln!(out, "estimate,{}", dbl(value));
            let _ = writeln!(out, "certified,{}", est.certified);
            if let Some(t) = tail {
                let _ = writeln!(out, "tail_bound,{}", dbl(t));
            }
            let _ = writeln!(out, "depth,{}", est.depth);
            let _ = writeln!(out, "terms,{}", est.terms);
            let _ = writeln!(out, "exact,{}", est.exact);
            let _ = writeln!(out, "divergence_suspected,{}", est.divergence_suspected);
            out
        }
    }
}

// ---------- trajectory ----------

fn cmd_trajectory(a: &TrajectoryArgs, format: Format) -> Result<String, Failure> {
    let source = resolve_source(&a.source)?;
    let (labels, values): (Vec<(&str, String)>, Vec<Rational>) = match &source {
        Source::Rational { zeta } => {
            if a.x.is_some() {
                return Err(Failure::usage("--x only applies to word sources"));
            }
            (
                vec![("zeta", zeta.to_string())],
                trajectory(zeta, a.steps)?,
            )
        }
        Source::Word { word } => {
            let x = parse_rat(
                a.x.as_ref()
                    .ok_or_else(|| Failure::usage("word sources need a start value --x"))?,
            )?;
            let stream = WordStream::from_word(word.clone());
            (
                vec![("word", word.to_string()), ("x", x.to_string())],
                pseudo_trajectory(&x, &stream, a.steps)?,
            )
        }
        Source::Sturmian { spec, oracle } => {
            let x = parse_rat(
                a.x.as_ref()
                    .ok_or_else(|| Failure::usage("word sources need a start value --x"))?,
            )?;
            let stream = sturmian_stream(oracle, SturmianVariant::UpperC);
            (
                vec![("alpha", spec.clone()), ("x", x.to_string())],
                pseudo_trajectory(&x, &stream, a.steps)?,
            )
        }
    };
    match format {
        Format::Plain => {
            let mut out = String::new();
            for (k, v) in &labels {
                kv(&mut out, k, v);
            }
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(out, "t[{i}] = {v}");
            }
            Ok(out)
        }
        Format::Json => {
            let mut o = Map::new();
            for (k, v) in &labels {
                o.insert((*k).into(), json!(v));
            }
            o.insert("steps".into(), json!(a.steps));
            let exact: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            let doubles: Vec<f64> = values.iter().map(rational_to_f64).collect();
            o.insert("values".into(), json!(exact));
            o.insert("doubles".into(), json!(doubles));
            Ok(finish_json(o))
        }
        Format::Csv => {
            let mut out = String::from(CSV_VERSION);
            out.push_str("step,exact,double\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", i, v, dbl(rational_to_f64(v)));
            }
            Ok(out)
        }
    }
}

// ---------- construct ----------

enum Analysis {
    Slope(SlopeReport),
    Ratio(RatioReport),
}

fn cmd_construct(a: &ConstructArgs, format: Format) -> Result<String, Failure> {
    let oracle = parse_slope(&a.alpha)?;
    let family = parse_family(&a.family)?;
    let labels = |out: &mut String| {
        kv(out, "alpha", a.alpha.trim());
        kv(out, "family", a.family.trim());
        kv(out, "shape", shape_label(a.shape));
        kv(out, "factors", a.top);
    };

    if a.top == 0 {
        if a.analyze.is_some() {
            return Err(Failure::usage("--analyze needs at least one factor"));
        }
        let empty = FactorLog { records: vec![] };
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                labels(&mut out);
                kv(&mut out, "length", 0);
                kv(&mut out, "height", 0);
                kv(&mut out, "word", "");
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert("alpha".into(), json!(a.alpha.trim()));
                o.insert("family".into(), json!(a.family.trim()));
                o.insert("shape".into(), json!(shape_label(a.shape)));
                o.insert("factors".into(), json!(0));
                o.insert("length".into(), json!(0));
                o.insert("height".into(), json!(0));
                o.insert("word".into(), json!(""));
                o.insert("log".into(), json!([]));
                finish_json(o)
            }
            Format::Csv => format!("{}{}", CSV_VERSION, empty.csv_rows()),
        });
    }

    let (stream, log) = construct_word(&ConstructorConfig {
        oracle,
        family,
        shape: shape_of(a.shape),
        factors: a.top,
    })?;
    let len = stream.finite_len().expect("constructed words are finite");
    let word = stream.prefix(len)?;
    let analysis = match a.analyze {
        None => None,
        Some(kind) => {
            let window = a.window.unwrap_or(len);
            if window < 2 {
                return Err(Failure::usage("analysis windows need at least two digits"));
            }
            Some(match kind {
                AnalyzeKind::Slope => Analysis::Slope(slope_stats(&stream, window)?),
                AnalyzeKind::Ratio => Analysis::Ratio(ratio_criterion(&stream, window)?),
            })
        }
    };

    match format {
        Format::Plain => {
            let mut out = String::new();
            labels(&mut out);
            kv(&mut out, "length", len);
            kv(&mut out, "height", word.height());
            kv(&mut out, "word", word.runlength_string());
            if let Some(an) = &analysis {
                render_analysis_plain(&mut out, an);
            }
            Ok(out)
        }
        Format::Json => {
            let mut o = Map::new();
            o.insert("alpha".into(), json!(a.alpha.trim()));
            o.insert("family".into(), json!(a.family.trim()));
            o.insert("shape".into(), json!(shape_label(a.shape)));
            o.insert("factors".into(), json!(a.top));
            o.insert("length".into(), json!(len));
            o.insert("height".into(), json!(word.height()));
            o.insert("word".into(), json!(word.runlength_string()));
            let rows: Vec<Value> = log
                .records
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n, "f": r.f, "m": r.m, "l": r.len,
                        "h": r.height, "z": r.zeros, "d": r.distance,
                    })
                })
                .collect();
            o.insert("log".into(), json!(rows));
            if let Some(an) = &analysis {
                o.insert("analysis".into(), analysis_json(an));
            }
            Ok(finish_json(o))
        }
        Format::Csv => {
            // The factor log is the table; an analysis replaces it on request.
            let body = match &analysis {
                None => log.csv_rows(),
                Some(Analysis::Slope(r)) => r.csv_rows(),
                Some(Analysis::Ratio(r)) => r.csv_rows(),
            };
            Ok(format!("{CSV_VERSION}{body}"))
        }
    }
}

fn render_analysis_plain(out: &mut String, an: &Analysis) {
    match an {
        Analysis::Slope(r) => {
            kv(out, "analysis", "slope");
            kv(out, "window", r.window);
            match &r.verdict {
                SlopeVerdict::Above { tail_from, delta } => {
                    kv(out, "verdict", "above");
                    kv(out, "tail_from", tail_from);
                    kv(out, "delta", delta);
                }
                SlopeVerdict::Below { tail_from } => {
                    kv(out, "verdict", "below");
                    kv(out, "tail_from", tail_from);
                }
                SlopeVerdict::Straddles => kv(out, "verdict", "straddles"),
            }
            kv(out, "final_ratio", dbl(r.final_ratio));
            kv(out, "liminf_proxy", dbl(r.liminf_proxy));
            kv(out, "pow_ratio_shrinks", r.pow_ratio_shrinks);
        }
        Analysis::Ratio(r) => {
            kv(out, "analysis", "ratio");
            kv(out, "scan_limit", r.scan_limit);
            kv(out, "ells", join(r.ells.iter().map(|e| e.ell), ","));
            kv(out, "gaps", join(r.gaps.iter(), ","));
            kv(out, "ratios", join(r.ratios.iter(), ","));
            if let Some(m) = &r.max_tail_ratio {
                kv(out, "max_tail_ratio", m);
            }
            if let Some(m) = &r.min_tail_ratio {
                kv(out, "min_tail_ratio", m);
            }
            kv(
                out,
                "limit_points",
                join(
                    r.limit_points.iter().map(|(p, c)| format!("{p}:{c}")),
                    ",",
                ),
            );
            kv(out, "verdict", verdict_label(&r.verdict));
        }
    }
}

fn analysis_json(an: &Analysis) -> Value {
    match an {
        Analysis::Slope(r) => {
            let verdict = match &r.verdict {
                SlopeVerdict::Above { tail_from, delta } => json!({
                    "side": "above", "tail_from": tail_from, "delta": delta.to_string(),
                }),
                SlopeVerdict::Below { tail_from } => {
                    json!({ "side": "below", "tail_from": tail_from })
                }
                SlopeVerdict::Straddles => json!({ "side": "straddles" }),
            };
            json!({
                "kind": "slope",
                "window": r.window,
                "verdict": verdict,
                "final_ratio": r.final_ratio,
                "liminf_proxy": r.liminf_proxy,
                "pow_ratio_shrinks": r.pow_ratio_shrinks,
            })
        }
        Analysis::Ratio(r) => {
            let ells: Vec<u64> = r.ells.iter().map(|e| e.ell).collect();
            let ratios: Vec<String> = r.ratios.iter().map(|x| x.to_string()).collect();
            let points: Vec<Value> = r
                .limit_points
                .iter()
                .map(|(p, c)| json!({ "point": p.to_string(), "count": c }))
                .collect();
            json!({
                "kind": "ratio",
                "scan_limit": r.scan_limit,
                "ells": ells,
                "gaps": r.gaps,
                "ratios": ratios,
                "max_tail_ratio": r.max_tail_ratio.as_ref().map(|x| x.to_string()),
                "min_tail_ratio": r.min_tail_ratio.as_ref().map(|x| x.to_string()),
                "limit_points": points,
                "verdict": verdict_label(&r.verdict),
            })
        }
    }
}

// ---------- 3adic ----------

fn cmd_3adic(a: &ThreeAdicArgs, format: Format) -> Result<String, Failure> {
    let source = resolve_source(&a.source)?;
    let (stream, label): (WordStream, (&str, String)) = match &source {
        Source::Sturmian { spec, oracle } => (
            sturmian_stream(oracle, SturmianVariant::UpperC),
            ("alpha", spec.clone()),
        ),
        Source::Word { word } => (
            WordStream::from_word(word.clone()),
            ("word", word.to_string()),
        ),
        Source::Rational { .. } => {
            return Err(Failure::usage("3adic takes --sturmian or --word sources"))
        }
    };

    if let Some(lmax) = a.table {
        if lmax == 0 {
            return Err(Failure::usage("--table needs LMAX >= 1"));
        }
        let rows = (1..=lmax)
            .map(|l| three_adic_row(&stream, l))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                kv(&mut out, label.0, &label.1);
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "l={} word={} t0={} cycle={} residues={} digits={}",
                        r.length,
                        r.word,
                        r.map_at_zero,
                        r.cycle,
                        join(r.residues.iter(), ","),
                        r.digit_string(),
                    );
                }
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert(label.0.into(), json!(label.1));
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        let residues: Vec<String> =
                            r.residues.iter().map(|x| x.to_string()).collect();
                        json!({
                            "l": r.length,
                            "word": r.word.to_string(),
                            "t0": r.map_at_zero.to_string(),
                            "cycle": r.cycle.to_string(),
                            "residues": residues,
                            "digits": r.digit_string(),
                        })
                    })
                    .collect();
                o.insert("rows".into(), json!(rows));
                finish_json(o)
            }
            Format::Csv => {
                let mut out = String::from(CSV_VERSION);
                out.push_str("l,word,t0,cycle,residues,digits\n");
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.length,
                        r.word,
                        r.map_at_zero,
                        r.cycle,
                        join(r.residues.iter(), " "),
                        r.digit_string(),
                    );
                }
                out
            }
        });
    }

    let cuts: Vec<u64> = if let Some(k) = a.l_odd {
        let Source::Sturmian { oracle, .. } = &source else {
            return Err(Failure::usage("--l-odd cuts need a --sturmian source"));
        };
        convergent_cuts(oracle, true, k)?
    } else if let Some(k) = a.l_even {
        let Source::Sturmian { oracle, .. } = &source else {
            return Err(Failure::usage("--l-even cuts need a --sturmian source"));
        };
        convergent_cuts(oracle, false, k)?
    } else {
        let list = a.l_list.clone().expect("cut group is required");
        if list.is_empty() || list[0] == 0 || !list.windows(2).all(|w| w[0] < w[1]) {
            return Err(Failure::usage("--l-list needs ascending positive lengths"));
        }
        list
    };
    let depth = a
        .depth
        .ok_or_else(|| Failure::usage("cut modes need --depth digits"))?;
    let e = output_3adic(&stream, &cuts, depth)?;

    Ok(match format {
        Format::Plain => {
            let mut out = String::new();
            kv(&mut out, label.0, &label.1);
            kv(&mut out, "cuts", join(cuts.iter(), ","));
            kv(&mut out, "digits", e.digit_string());
            kv(
                &mut out,
                "residues",
                join(e.residues.iter().map(|r| r.value.to_string()), ","),
            );
            out
        }
        Format::Json => {
            let mut o = Map::new();
            o.insert(label.0.into(), json!(label.1));
            o.insert("cuts".into(), json!(cuts));
            o.insert("digits".into(), json!(e.digit_string()));
            let residues: Vec<String> = e.residues.iter().map(|r| r.value.to_string()).collect();
            o.insert("residues".into(), json!(residues));
            finish_json(o)
        }
        Format::Csv => {
            let mut out = String::from(CSV_VERSION);
            out.push_str("n,digit,residue\n");
            for (i, d) in e.digits.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", i + 1, d, e.residues[i].value);
            }
            out
        }
    })
}

// ---------- sweep-alpha ----------

struct SweepRow {
    alpha: String,
    length: u64,
    estimate: f64,
    certified: bool,
    rational: bool,
}

fn cmd_sweep(a: &SweepArgs, format: Format) -> Result<String, Failure> {
    if a.top == 0 {
        return Err(Failure::usage("sweep needs --top >= 1"));
    }
    if a.jobs == 0 {
        return Err(Failure::usage("--jobs needs at least one worker"));
    }
    let specs: Vec<String> = a
        .alphas
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    let family = parse_family(&a.family)?;
    let shape = shape_of(a.shape);
    let eps = parse_rat(&a.eps)?;
    let floor = a.slope_floor.as_ref().map(|s| parse_rat(s)).transpose()?;

    let eval = |spec: &String| -> Result<SweepRow, Failure> {
        let oracle = parse_slope(spec)?;
        ensure_staircase_slope(&oracle, spec)?;
        let rational = matches!(oracle.kind(), AlphaKind::ExactRational(_));
        let (stream, _) = construct_word(&ConstructorConfig {
            oracle,
            family: family.clone(),
            shape,
            factors: a.top,
        })?;
        let length = stream.finite_len().expect("constructed words are finite");
        let mut params = EstimateParams::new(eps.clone(), a.max_depth);
        if let Some(f) = &floor {
            params = params.with_slope_floor(f.clone());
        }
        let est = phi_limit_estimate(&stream, &params)?;
        Ok(SweepRow {
            alpha: spec.clone(),
            length,
            estimate: rational_to_f64(&est.value),
            certified: est.certified,
            rational,
        })
    };
    let results: Vec<Result<SweepRow, Failure>> = if a.jobs == 1 {
        specs.iter().map(eval).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs)
            .build()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
        pool.install(|| specs.par_iter().map(eval).collect())
    };
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }

    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "alpha": r.alpha,
                        "length": r.length,
                        "estimate": r.estimate,
                        "certified": r.certified,
                        "flag": if r.rational { "rational" } else { "" },
                    })
                })
                .collect();
            let mut o = Map::new();
            o.insert("rows".into(), json!(list));
            finish_json(o)
        }
        Format::Plain | Format::Csv => {
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str(CSV_VERSION);
            }
            out.push_str("alpha,length,estimate,certified,flag\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.alpha,
                    r.length,
                    dbl(r.estimate),
                    r.certified,
                    if r.rational { "rational" } else { "" },
                );
            }
            out
        }
    })
}

// ---------- stats ----------

fn cmd_stats(a: &StatsArgs, format: Format) -> Result<String, Failure> {
    if let Some(m) = a.means {
        if m == 0 {
            return Err(Failure::usage("--means needs M >= 1"));
        }
        let (arith, geo) = means(m)?;
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                kv(&mut out, "m", m);
                kv(&mut out, "arith", dbl(arith));
                kv(&mut out, "geo", dbl(geo));
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert("m".into(), json!(m));
                o.insert("arith".into(), json!(arith));
                o.insert("geo".into(), json!(geo));
                finish_json(o)
            }
            Format::Csv => {
                format!("{CSV_VERSION}m,arith,geo\n{m},{},{}\n", dbl(arith), dbl(geo))
            }
        });
    }

    if let Some(args) = &a.distribution {
        let lo = parse_rat(&args[0])?;
        let hi = parse_rat(&args[1])?;
        let m: u64 = args[2]
            .trim()
            .parse()
            .map_err(|_| Failure::usage("--distribution M must be a positive integer"))?;
        if m == 0 {
            return Err(Failure::usage("--distribution needs M >= 1"));
        }
        let rep = distribution_check(m, &lo, &hi)?;
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                kv(&mut out, "m", rep.m);
                kv(&mut out, "a", &rep.a);
                kv(&mut out, "b", &rep.b);
                kv(&mut out, "count", rep.count);
                kv(&mut out, "observed", dbl(rep.observed));
                kv(&mut out, "expected", dbl(rep.expected));
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert("m".into(), json!(rep.m));
                o.insert("a".into(), json!(rep.a.to_string()));
                o.insert("b".into(), json!(rep.b.to_string()));
                o.insert("count".into(), json!(rep.count));
                o.insert("observed".into(), json!(rep.observed));
                o.insert("expected".into(), json!(rep.expected));
                finish_json(o)
            }
            Format::Csv => format!(
                "{CSV_VERSION}m,a,b,count,observed,expected\n{},{},{},{},{},{}\n",
                rep.m,
                rep.a,
                rep.b,
                rep.count,
                dbl(rep.observed),
                dbl(rep.expected)
            ),
        });
    }

    if let Some(k) = a.sigma {
        if k < 2 {
            return Err(Failure::usage("--sigma needs K >= 2"));
        }
        let s = sigma_perm(k)?;
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                kv(&mut out, "k", s.k);
                kv(&mut out, "p", s.p_k);
                kv(&mut out, "rank", tuple(&s.sigma));
                kv(&mut out, "order", tuple(&s.reading_order));
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert("k".into(), json!(s.k));
                o.insert("p".into(), json!(s.p_k));
                o.insert("rank".into(), json!(s.sigma));
                o.insert("order".into(), json!(s.reading_order));
                finish_json(o)
            }
            Format::Csv => {
                let mut out = String::from(CSV_VERSION);
                out.push_str("i,rank,order\n");
                for i in 0..s.sigma.len() {
                    let _ = writeln!(out, "{},{},{}", i + 1, s.sigma[i], s.reading_order[i]);
                }
                out
            }
        });
    }

    if let Some(k) = a.mu_bound {
        if k < 2 {
            return Err(Failure::usage("--mu-bound needs K >= 2"));
        }
        let rep = christoffel_mu_bound(k)?;
        let dev_lo = rational_to_f64(&rep.deviation.0);
        let dev_hi = rational_to_f64(&rep.deviation.1);
        return Ok(match format {
            Format::Plain => {
                let mut out = String::new();
                kv(&mut out, "k", rep.k);
                kv(&mut out, "p", rep.p_k);
                kv(&mut out, "q", rep.q_k);
                kv(&mut out, "value", &rep.series_value);
                kv(&mut out, "deviation_lo", dbl(dev_lo));
                kv(&mut out, "deviation_hi", dbl(dev_hi));
                kv(
                    &mut out,
                    "band",
                    format!("({},{})", rep.band.0, rep.band.1),
                );
                kv(&mut out, "within", rep.within_band);
                out
            }
            Format::Json => {
                let mut o = Map::new();
                o.insert("k".into(), json!(rep.k));
                o.insert("p".into(), json!(rep.p_k));
                o.insert("q".into(), json!(rep.q_k));
                o.insert("value".into(), json!(rep.series_value.to_string()));
                o.insert("deviation".into(), json!([dev_lo, dev_hi]));
                o.insert(
                    "band".into(),
                    json!([rep.band.0.to_string(), rep.band.1.to_string()]),
                );
                o.insert("within".into(), json!(rep.within_band));
                finish_json(o)
            }
            Format::Csv => format!(
                "{CSV_VERSION}k,p,q,value,deviation_lo,deviation_hi,band_lo,band_hi,within\n{},{},{},{},{},{},{},{},{}\n",
                rep.k,
                rep.p_k,
                rep.q_k,
                rep.series_value,
                dbl(dev_lo),
                dbl(dev_hi),
                rep.band.0,
                rep.band.1,
                rep.within_band
            ),
        });
    }

    let k = a.cone.expect("mode group is required");
    if k == 0 {
        return Err(Failure::usage("--cone needs K >= 1"));
    }
    let x = parse_rat(&a.x)?;
    let rep = cone_limits(&x, k)?;
    Ok(match format {
        Format::Plain => {
            let mut out = String::new();
            kv(&mut out, "x", &rep.x);
            let mut entries: Vec<(&str, &conjlab_core::analysis::ConeEntry)> = Vec::new();
            for e in &rep.odd {
                entries.push(("odd", e));
            }
            for e in &rep.even {
                entries.push(("even", e));
            }
            entries.sort_by_key(|(_, e)| e.k);
            for (parity, e) in entries {
                let _ = writeln!(
                    out,
                    "k={} q={} parity={} ratio={} approx={}",
                    e.k,
                    e.q,
                    parity,
                    e.ratio,
                    dbl(e.approx),
                );
            }
            out
        }
        Format::Json => {
            let mut o = Map::new();
            o.insert("x".into(), json!(rep.x.to_string()));
            let row = |parity: &str, e: &conjlab_core::analysis::ConeEntry| {
                json!({
                    "k": e.k, "q": e.q, "parity": parity,
                    "ratio": e.ratio.to_string(), "approx": e.approx,
                })
            };
            let mut rows: Vec<(usize, Value)> = Vec::new();
            for e in &rep.odd {
                rows.push((e.k, row("odd", e)));
            }
            for e in &rep.even {
                rows.push((e.k, row("even", e)));
            }
            rows.sort_by_key(|(k, _)| *k);
            let rows: Vec<Value> = rows.into_iter().map(|(_, v)| v).collect();
            o.insert("rows".into(), json!(rows));
            finish_json(o)
        }
        Format::Csv => format!("{CSV_VERSION}{}", rep.csv_rows()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_specs_cover_named_and_rational_forms() {
        assert!(matches!(
            parse_slope("ln2").unwrap().kind(),
            AlphaKind::NatLog
        ));
        assert!(matches!(
            parse_slope("ln2ln3").unwrap().kind(),
            AlphaKind::LogRatio23
        ));
        assert!(matches!(
            parse_slope("ln2/ln3").unwrap().kind(),
            AlphaKind::LogRatio23
        ));
        assert!(matches!(
            parse_slope("golden").unwrap().kind(),
            AlphaKind::QuadraticSurd { .. }
        ));
        let r = parse_slope("7/10").unwrap();
        assert!(matches!(r.kind(), AlphaKind::ExactRational(x) if *x == rat(7, 10)));
        let d = parse_slope("0.64").unwrap();
        assert!(matches!(d.kind(), AlphaKind::ExactRational(x) if *x == rat(16, 25)));
        assert!(parse_slope("0").is_err());
        assert!(parse_slope("1").is_err());
        assert!(parse_slope("3/2").is_err());
        assert!(parse_slope("nonsense").is_err());
    }

    #[test]
    fn family_specs_parse_and_validate() {
        assert!(matches!(
            parse_family("identity").unwrap(),
            RunFamily::Identity
        ));
        assert!(matches!(
            parse_family("deficit:5/6").unwrap(),
            RunFamily::Deficit { c: 5, d: 6 }
        ));
        assert!(matches!(
            parse_family("power:13/10").unwrap(),
            RunFamily::PowerFloor { .. }
        ));
        assert!(
            matches!(parse_family("poly:0,2,1").unwrap(), RunFamily::Polynomial { coeffs } if coeffs == vec![0, 2, 1])
        );
        assert!(parse_family("deficit:6/5").is_err());
        assert!(parse_family("deficit:6").is_err());
        assert!(parse_family("power:1").is_err());
        assert!(parse_family("poly:0,0").is_err());
        assert!(parse_family("squares").is_err());
    }

    #[test]
    fn staircase_interval_is_open_on_both_sides() {
        // 2/3 > ln2/ln3 since 3^2 > 2^3; 5/8 < ln2/ln3 since 2^8 > 3^5.
        assert!(ensure_staircase_slope(&parse_slope("2/3").unwrap(), "2/3").is_ok());
        assert!(ensure_staircase_slope(&parse_slope("5/8").unwrap(), "5/8").is_err());
        assert!(ensure_staircase_slope(&parse_slope("ln2").unwrap(), "ln2").is_ok());
        assert!(ensure_staircase_slope(&parse_slope("ln2ln3").unwrap(), "ln2ln3").is_err());
        assert!(ensure_staircase_slope(&parse_slope("golden").unwrap(), "golden").is_err());
    }

    #[test]
    fn doubles_print_with_seventeen_significant_digits() {
        assert_eq!(dbl(0.5), "5.0000000000000000e-1");
        assert_eq!(dbl(-24.173), "-2.4173000000000000e1");
    }

    #[test]
    fn cli_arguments_stay_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
