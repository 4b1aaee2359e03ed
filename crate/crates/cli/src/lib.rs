//! Command implementations behind the `polycf` binary.
//!
//! Every command renders into a `String`; [`run`] maps failures to exit codes:
//! 0 success, 1 usage or parse error, 2 no convergence, 3 internal oracle
//! inconsistency.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use polycf::analysis::analyze;
use polycf::cfengine::{evaluate_backward, Convergents};
use polycf::dsl::{cf_to_dsl, parse_cf_spec_labeled, parse_scaling_spec, scaling_to_dsl, sequence_to_dsl};
use polycf::equivtrans::verify_invariance;
use polycf::exactnum::{floor_log10, format_scientific, pow10, GUARD_DIGITS};
use polycf::gausshyp::{gauss_cf, gauss_coefficients, GaussParameters};
use polycf::presets::{self, Preset, PublishedRow, ReferenceConstant, DEFAULT_MAX_DEPTH, PRESET_NAMES};
use polycf::{evaluate, ContinuedFraction, Error, HighPrecisionDecimal, Rational};

#[derive(Debug, Parser)]
#[command(name = "polycf", version, about = "Generalized continued fractions with polynomial coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a fraction to a requested number of digits.
    Eval(EvalArgs),
    /// Convergents and their errors against a reference constant.
    Table(TableArgs),
    /// Build and evaluate the Gauss fraction for 2F1 parameters.
    Gauss(GaussArgs),
    /// Apply an equivalence transformation and check convergent invariance.
    Transform(TransformArgs),
    /// Worpitzky and convergence-rate analysis.
    Analyze(AnalyzeArgs),
    /// List the built-in fractions.
    Presets(PresetsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Fraction in the DSL, inline or as a file path.
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<String>,
    /// Built-in fraction name.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
    /// Depth limit for the stabilization search (defaults per preset).
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Evaluate the fraction truncated at exactly this depth instead.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// `pi_over_4`, `minus_pi_over_4` or a decimal; defaults per preset.
    #[arg(long)]
    pub reference: Option<String>,
    /// Comma-separated indices; an empty list gives an empty table.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub rows: Option<Vec<String>>,
    /// Also emit rows n-1 and n+1.
    #[arg(long)]
    pub bracket: bool,
    /// Decimals printed for convergent values.
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(allow_hyphen_values = true)]
    pub a: String,
    #[arg(allow_hyphen_values = true)]
    pub b: String,
    #[arg(allow_hyphen_values = true)]
    pub c: String,
    #[arg(allow_hyphen_values = true)]
    pub z: String,
    /// Number of coefficients d_n to print (at most 20).
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Scaling sequence `r(n) = ...`, inline or as a file path.
    #[arg(long)]
    pub scaling: String,
    /// Check invariance for n = 1..=N.
    #[arg(long = "n", default_value_t = 50)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of rho samples and convergent errors.
    #[arg(long = "n", default_value_t = 40)]
    pub n: usize,
    /// Reference constant for empirical errors; defaults per preset.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// A failed command: message plus process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => 2,
            Error::OracleInconsistency(_) => 3,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub cf_label: String,
    pub n: usize,
    /// `None` when `B_n = 0`.
    pub convergent_value: Option<String>,
    pub abs_error: Option<String>,
    pub digits: Option<i64>,
    pub published: Option<PublishedRow>,
    pub note: String,
}

/// `floor(−log₁₀ e)` for `e > 0`.
pub fn correct_digits(e: &Rational) -> i64 {
    let f = floor_log10(e);
    let exact_power = if f >= 0 {
        *e == Rational::from_integer(pow10(f as u32))
    } else {
        *e == Rational::new(1.into(), pow10((-f) as u32))
    };
    if exact_power {
        -f
    } else {
        -f - 1
    }
}

/// Resolved input: the fraction plus preset metadata when it came from one.
pub struct Source {
    pub cf: ContinuedFraction,
    pub preset: Option<Preset>,
}

fn read_text(value: &str) -> CliResult<(String, Option<String>)> {
    let path = Path::new(value);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {value}: {e}")))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        Ok((text, stem))
    } else {
        Ok((value.to_string(), None))
    }
}

pub fn resolve_source(args: &SourceArgs) -> CliResult<Source> {
    match (&args.spec, &args.preset) {
        (Some(spec), None) => {
            let (text, stem) = read_text(spec)?;
            let cf = parse_cf_spec_labeled(&text, stem.as_deref().unwrap_or("spec"))?;
            Ok(Source { cf, preset: None })
        }
        (None, Some(name)) => {
            let p = presets::preset(name)?;
            Ok(Source { cf: p.cf.clone(), preset: Some(p) })
        }
        (None, None) => Err(CliError::usage("one of --spec or --preset is required")),
        (Some(_), Some(_)) => Err(CliError::usage("--spec and --preset are mutually exclusive")),
    }
}

fn resolve_reference(flag: Option<&str>, source: &Source) -> CliResult<Option<ReferenceConstant>> {
    match flag {
        Some(s) => Ok(Some(s.parse()?)),
        None => Ok(source.preset.as_ref().and_then(|p| p.reference.clone())),
    }
}

fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::usage(format!("csv output failed: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<String> {
    let src = resolve_source(&args.source)?;
    if args.digits == 0 {
        return Err(CliError::usage("--digits must be at least 1"));
    }
    let (value, depth) = match args.depth {
        Some(n) => (evaluate_backward(&src.cf, n, args.digits)?, n),
        None => {
            let max_depth = args
                .max_depth
                .or(src.preset.as_ref().map(|p| p.max_depth))
                .unwrap_or(DEFAULT_MAX_DEPTH);
            let e = evaluate(&src.cf, args.digits, max_depth)?;
            (e.value.rescale(args.digits), e.depth)
        }
    };
    Ok(match args.format {
        Format::Text => format!("{value}\ndepth {depth}\n"),
        Format::Json => to_json_string(&json!({
            "label": src.cf.label(),
            "value": value.to_string(),
            "digits": args.digits,
            "depth": depth,
        })),
        Format::Csv => csv_string(
            &["label", "value", "digits", "depth"],
            &[vec![
                src.cf.label().to_string(),
                value.to_string(),
                args.digits.to_string(),
                depth.to_string(),
            ]],
        )?,
    })
}

fn parse_rows(rows: &Option<Vec<String>>, source: &Source) -> CliResult<Vec<usize>> {
    let Some(rows) = rows else {
        let published = source.preset.as_ref().and_then(|p| p.published.as_ref());
        return Ok(match published {
            Some(p) => p.table.iter().map(|r| r.n).collect(),
            None => vec![5, 10, 15],
        });
    };
    rows.iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::usage(format!("invalid row index {s:?}; rows start at 1"))),
        })
        .collect()
}

/// Computes table records for the requested indices.
pub fn table_records(
    source: &Source,
    reference: &ReferenceConstant,
    rows: &[usize],
    bracket: bool,
    digits: u32,
) -> CliResult<Vec<VerificationRecord>> {
    let mut ns: Vec<usize> = Vec::new();
    for &n in rows {
        if bracket && n > 1 {
            ns.push(n - 1);
        }
        ns.push(n);
        if bracket {
            ns.push(n + 1);
        }
    }
    ns.sort_unstable();
    ns.dedup();
    let Some(&max_n) = ns.last() else {
        return Ok(Vec::new());
    };
    let ref_digits = (digits + GUARD_DIGITS).max(max_n as u32 + 40);
    let target = reference.value(ref_digits)?.to_rational();
    let published = source.preset.as_ref().and_then(|p| p.published.as_ref());

    let mut out = Vec::with_capacity(ns.len());
    let mut wanted = ns.iter().peekable();
    for c in Convergents::new(&source.cf).take(max_n) {
        let c = c?;
        if wanted.peek() != Some(&&c.n) {
            continue;
        }
        wanted.next();
        let pub_row = published.and_then(|p| p.table.iter().find(|r| r.n == c.n)).cloned();
        let (value, abs_error, d) = match &c.value {
            Some(v) => {
                let err = (v - &target).abs();
                let d = (!err.is_zero()).then(|| correct_digits(&err));
                (
                    Some(HighPrecisionDecimal::from_rational(v, digits).to_string()),
                    Some(format_scientific(&err, 3)),
                    d,
                )
            }
            None => (None, None, None),
        };
        let note = match (&abs_error, &pub_row) {
            (None, _) => "undef".to_string(),
            (Some(e), Some(p)) if *e == p.abs_error => "matches published".to_string(),
            (Some(_), Some(_)) => "differs from published".to_string(),
            (Some(_), None) => String::new(),
        };
        out.push(VerificationRecord {
            cf_label: source.cf.label().to_string(),
            n: c.n,
            convergent_value: value,
            abs_error,
            digits: d,
            published: pub_row,
            note,
        });
    }
    Ok(out)
}

const TABLE_HEADER: [&str; 8] = [
    "label",
    "n",
    "value",
    "abs_error",
    "digits",
    "published_error",
    "published_digits",
    "note",
];

fn record_cells(r: &VerificationRecord) -> Vec<String> {
    let undef = || "undef".to_string();
    vec![
        r.cf_label.clone(),
        r.n.to_string(),
        r.convergent_value.clone().unwrap_or_else(undef),
        r.abs_error.clone().unwrap_or_else(undef),
        match (&r.abs_error, r.digits) {
            (_, Some(d)) => d.to_string(),
            (Some(_), None) => "exact".to_string(),
            (None, None) => undef(),
        },
        r.published.as_ref().map_or(String::new(), |p| p.abs_error.to_string()),
        r.published.as_ref().map_or(String::new(), |p| p.digits.to_string()),
        r.note.clone(),
    ]
}

pub fn cmd_table(args: &TableArgs) -> CliResult<String> {
    let src = resolve_source(&args.source)?;
    let reference = resolve_reference(args.reference.as_deref(), &src)?
        .ok_or_else(|| CliError::usage("--reference is required for fractions without a known limit"))?;
    let rows = parse_rows(&args.rows, &src)?;
    let records = table_records(&src, &reference, &rows, args.bracket, args.digits)?;
    let cells: Vec<Vec<String>> = records.iter().map(record_cells).collect();
    Ok(match args.format {
        Format::Text => {
            let mut out = format!("reference: {}\n", reference.name());
            out += &aligned(&TABLE_HEADER, &cells);
            out
        }
        Format::Csv => csv_string(&TABLE_HEADER, &cells)?,
        Format::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .map(|c| {
                    let obj: serde_json::Map<String, Value> = TABLE_HEADER
                        .iter()
                        .zip(c)
                        .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            to_json_string(&json!({ "reference": reference.name(), "rows": rows }))
        }
    })
}

fn parse_rational(name: &str, s: &str) -> CliResult<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::usage(format!("{name}: not a rational number: {s:?}")))
}

/// Depths at which `cmd_gauss` reports truncated values.
const GAUSS_CHECKPOINTS: [usize; 4] = [10, 100, 1_000, 10_000];

/// Prints the coefficient list, fraction and checkpoints. The evaluation
/// result is returned separately so output survives a no-convergence exit.
pub fn cmd_gauss(args: &GaussArgs) -> (String, CliResult<()>) {
    let mut out = String::new();
    let res = gauss_body(args, &mut out);
    (out, res)
}

fn gauss_body(args: &GaussArgs, out: &mut String) -> CliResult<()> {
    let p = GaussParameters::new(
        parse_rational("a", &args.a)?,
        parse_rational("b", &args.b)?,
        parse_rational("c", &args.c)?,
        parse_rational("z", &args.z)?,
    )?;
    let cf = gauss_cf(&p, args.max_depth.max(100))?;
    let count = args.depth.min(20);
    let d = gauss_coefficients(&p, count)?;
    let list: Vec<String> = d.d.iter().map(|x| x.to_string()).collect();
    writeln!(out, "{}", cf.label()).unwrap();
    writeln!(out, "d_1..d_{count}: {}", list.join(", ")).unwrap();
    writeln!(out, "spec: {}", cf_to_dsl(&cf)).unwrap();
    for n in GAUSS_CHECKPOINTS.into_iter().filter(|&n| n <= args.max_depth) {
        let v = evaluate_backward(&cf, n, args.digits)?;
        writeln!(out, "f_{n} = {v}").unwrap();
    }
    let e = evaluate(&cf, args.digits, args.max_depth)?;
    writeln!(out, "value: {}\ndepth {}", e.value.rescale(args.digits), e.depth).unwrap();
    Ok(())
}

pub fn cmd_transform(args: &TransformArgs) -> CliResult<String> {
    let src = resolve_source(&args.source)?;
    let (text, _) = read_text(&args.scaling)?;
    let r = parse_scaling_spec(&text)?;
    let report = verify_invariance(&src.cf, &r, args.n)?;
    let t = &report.transformed;
    let mut out = String::new();
    writeln!(out, "input: {}", cf_to_dsl(&src.cf)).unwrap();
    writeln!(out, "scaling: {}", scaling_to_dsl(&r)).unwrap();
    writeln!(out, "transformed: {}", cf_to_dsl(t)).unwrap();
    writeln!(out, "a~(n) tail: {}", t.a().tail().rule).unwrap();
    writeln!(out, "b~(n) tail: {}", sequence_to_dsl(t.b())).unwrap();
    for n in 1..=5 {
        writeln!(out, "a~_{n} = {}", t.partial_numerator(n)?).unwrap();
    }
    for n in 1..=5 {
        writeln!(out, "b~_{n} = {}", t.partial_denominator(n)?).unwrap();
    }
    for v in &report.verdicts {
        let verdict = if v.values_equal { "EQUAL" } else { "DIFFERENT" };
        let pairs = if v.pairs_equal { "pairs equal" } else { "pairs rescaled" };
        writeln!(out, "n = {}: {verdict} ({pairs})", v.n).unwrap();
    }
    if !report.all_equal() {
        return Err(CliError {
            code: 3,
            message: format!("{out}convergent values changed under the transformation"),
        });
    }
    writeln!(out, "invariance: all {} convergents EQUAL", report.verdicts.len()).unwrap();
    Ok(out)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<String> {
    let src = resolve_source(&args.source)?;
    let reference = resolve_reference(args.reference.as_deref(), &src)?;
    let ref_value = reference
        .as_ref()
        .map(|r| r.value(args.n as u32 + 40))
        .transpose()?;
    let mut report = analyze(&src.cf, args.n, ref_value.as_ref())?;
    if let Some(p) = src.preset.as_ref().and_then(|p| p.published.as_ref()) {
        report.compare_rho_expansion(&p.rho_expansion);
    }
    if args.format == Format::Json {
        return Ok(to_json_string(&report.to_json()));
    }
    if args.format == Format::Csv {
        return Err(CliError::usage("analyze supports --format text or json"));
    }
    let mut out = String::new();
    let none = || "none".to_string();
    writeln!(out, "label: {}", report.label).unwrap();
    writeln!(
        out,
        "rho(n): {}",
        report.rho_closed_form.as_ref().map_or_else(none, |f| f.to_string())
    )
    .unwrap();
    writeln!(out, "L: {}", report.limit.as_ref().map_or_else(none, |l| l.to_string())).unwrap();
    writeln!(out, "classification: {}", report.classification).unwrap();
    writeln!(out, "sigma: {}", report.sigma.as_ref().map_or_else(none, |s| s.to_string())).unwrap();
    writeln!(
        out,
        "digits per 10 iterations: {}",
        report.digits_per_10.as_ref().map_or_else(none, |d| d.to_trimmed_string())
    )
    .unwrap();
    if let Some(e) = &report.rho_expansion {
        let terms: Vec<String> = e
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c}) n^{}", e.top_degree - i as i64))
            .collect();
        writeln!(out, "rho expansion: {} + O(n^{})", terms.join(" + "), e.remainder_order).unwrap();
    }
    for (n, rho) in report.rho_samples.iter().take(8) {
        writeln!(out, "rho_{n} = {}", rho.as_ref().map_or_else(|| "undef".into(), |r| r.to_string())).unwrap();
    }
    if let Some(emp) = &report.empirical {
        if let (Some(e), Some(r)) = (emp.errors.iter().flatten().last(), emp.ratios.last()) {
            writeln!(out, "error at n = {}: {}", args.n, format_scientific(e, 3)).unwrap();
            writeln!(out, "last error ratio: {}", r.to_trimmed_string()).unwrap();
        }
    }
    for f in &report.flags {
        writeln!(out, "flag: {f}").unwrap();
    }
    Ok(out)
}

pub fn cmd_presets(args: &PresetsArgs) -> CliResult<String> {
    let all: Vec<Preset> = PRESET_NAMES
        .iter()
        .map(|n| presets::preset(n))
        .collect::<Result<_, _>>()?;
    Ok(match args.format {
        Format::Text => all
            .iter()
            .map(|p| format!("{}: {}\n  {}\n", p.name, p.description, cf_to_dsl(&p.cf)))
            .collect(),
        Format::Json => to_json_string(&Value::Array(
            all.iter()
                .map(|p| {
                    json!({
                        "name": p.name,
                        "description": p.description,
                        "spec": cf_to_dsl(&p.cf),
                        "reference": p.reference.as_ref().map(|r| r.name()),
                        "max_depth": p.max_depth,
                    })
                })
                .collect(),
        )),
        Format::Csv => csv_string(
            &["name", "description", "spec"],
            &all.iter()
                .map(|p| vec![p.name.to_string(), p.description.to_string(), cf_to_dsl(&p.cf)])
                .collect::<Vec<_>>(),
        )?,
    })
}

/// Parses `argv`, runs the command and writes to the given streams.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Table(a) => cmd_table(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Presets(a) => cmd_presets(a),
        Command::Gauss(a) => {
            let (out, res) = cmd_gauss(a);
            let _ = stdout.write_all(out.as_bytes());
            res.map(|()| String::new())
        }
    };
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
