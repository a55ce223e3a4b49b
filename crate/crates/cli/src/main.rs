use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bentforge::charsum::kloosterman_full;
use bentforge::checks::{run_check, CHECK_IDS};
use bentforge::dillon::{is_bent, DillonFile, DillonFunction};
use bentforge::gf::o_of_d;
use bentforge::search::{
    golden_preset, persist, run_golden, run_job, summary_path, FamilyTemplate, GoldenMeasure,
    OutputFormat, SearchJob, SearchOutcome, SlotRange, DEFAULT_CAP,
};
use bentforge::{CycInt, Elem, Error, FieldCtx, FieldSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

/// Dillon-type bent functions: exact character sums, criteria and searches.
#[derive(Debug, Parser)]
#[command(name = "bentforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the modulus, generators, unit circle and o(d) table.
    FieldInfo(FieldArgs),
    /// Tabulate K_m(a) over the whole field F_{p^m}.
    Kloosterman(KloostermanArgs),
    /// Decide bentness of a Dillon function given as JSON.
    Verify(VerifyArgs),
    /// Enumerate a family grid, or run a reference example.
    Search(SearchArgs),
    /// Run an exhaustive identity check at one field.
    Check(CheckArgs),
}

/// Field given either by `--p/--n` or by a JSON field file.
#[derive(Debug, Args)]
struct FieldArgs {
    #[arg(long, requires = "n", conflicts_with = "field_file")]
    p: Option<u32>,
    #[arg(long, requires = "p", conflicts_with = "field_file")]
    n: Option<u32>,
    /// JSON `{"p", "n", "modulus"}`, coefficients constant term first.
    #[arg(long)]
    field_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KloostermanArgs {
    #[arg(long, requires = "m", conflicts_with = "field_file")]
    p: Option<u32>,
    #[arg(long, requires = "p", conflicts_with = "field_file")]
    m: Option<u32>,
    /// JSON spec of F_{p^m} itself.
    #[arg(long)]
    field_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a floating-point column.
    #[arg(long)]
    approx: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    function: PathBuf,
    /// Also print S as a complex number.
    #[arg(long)]
    approx: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> OutputFormat {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    B1,
    B2,
    P1,
    P2,
}

/// Range of the `b` slot in family searches.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum BRange {
    Zero,
    Nonzero,
    All,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Reference example preset.
    #[arg(long, conflicts_with = "family")]
    golden: Option<String>,
    #[arg(long, required_unless_present = "golden")]
    family: Option<FamilyArg>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    /// Range of the b slot (b1: F_{2^o}, p1: F_{p^2}, p2: F_p).
    #[arg(long, value_enum, default_value_t = BRange::Zero)]
    b: BRange,
    /// b1 only: skip points with a0 = a1.
    #[arg(long)]
    distinct: bool,
    /// p1 only: replace the monomial exponent.
    #[arg(long)]
    exponent: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "BENTFORGE_THREADS", default_value_t = 0)]
    threads: usize,
    /// Tolerance for floating-point criteria.
    #[arg(long, value_parser = positive_f64)]
    tol: Option<f64>,
    /// Largest grid, in points, that will be evaluated.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Keep one record per distinct function.
    #[arg(long)]
    dedupe: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    id: String,
    #[arg(long)]
    p: u32,
    #[arg(long, required_unless_present = "m", conflicts_with = "m")]
    n: Option<u32>,
    /// Half degree; the field is F_{p^{2m}}.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, env = "BENTFORGE_THREADS", default_value_t = 0)]
    threads: usize,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("tolerance must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Command failure, tagged with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.is_invariant_breach() {
            EXIT_INVARIANT
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<bentforge::GfError> for Failure {
    fn from(e: bentforge::GfError) -> Failure {
        Error::from(e).into()
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::FieldInfo(a) => field_info(&a),
        Command::Kloosterman(a) => kloosterman_table(&a),
        Command::Verify(a) => verify(&a),
        Command::Search(a) => search(&a),
        Command::Check(a) => check(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_field_file(path: &Path) -> Result<FieldSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_failure(path, e))
}

fn field_spec(args: &FieldArgs) -> Result<FieldSpec, Failure> {
    match (&args.field_file, args.p, args.n) {
        (Some(path), _, _) => read_field_file(path),
        (None, Some(p), Some(n)) => Ok(FieldSpec::smallest_primitive(p, n)?),
        _ => Err(usage("give --p and --n, or --field-file")),
    }
}

fn poly_string(modulus: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 {
            String::new()
        } else {
            c.to_string()
        };
        parts.push(match i {
            0 => coeff,
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        });
    }
    parts.join(" + ")
}

fn elem_string(ctx: &FieldCtx, x: Elem) -> String {
    let coeffs = ctx.coeffs(x);
    match ctx.log(x) {
        Some(k) => format!("alpha^{k} {coeffs:?}"),
        None => format!("0 {coeffs:?}"),
    }
}

fn field_info(args: &FieldArgs) -> CmdResult {
    let ctx = FieldCtx::from_spec(field_spec(args)?)?;
    let spec = ctx.spec();
    println!("field: F_{}^{} ({} elements)", spec.p, spec.n, ctx.size());
    println!("modulus: {}  coeffs {:?}", poly_string(&spec.modulus), spec.modulus);
    println!("alpha: {}", elem_string(&ctx, ctx.alpha()));
    let Some(m) = ctx.m() else {
        println!("n is odd: no unit circle");
        return Ok(0);
    };
    let xi = ctx.xi()?;
    println!("m: {m}");
    println!("xi: {}", elem_string(&ctx, xi));
    println!("|U| = {}", ctx.pm() + 1);
    println!("d\to(d)");
    for d in (1..=ctx.pm() + 1).filter(|d| (ctx.pm() + 1) % d == 0) {
        println!("{d}\t{}", o_of_d(ctx.p(), ctx.n(), d)?);
    }
    Ok(0)
}

#[derive(Debug, Serialize, Deserialize)]
struct KloostermanRow {
    alpha_log: String,
    value_coeffs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_approx: Option<f64>,
}

fn kloosterman_table(args: &KloostermanArgs) -> CmdResult {
    let spec = match (&args.field_file, args.p, args.m) {
        (Some(path), _, _) => read_field_file(path)?,
        (None, Some(p), Some(m)) => FieldSpec::smallest_primitive(p, m)?,
        _ => return Err(usage("give --p and --m, or --field-file")),
    };
    let ctx = FieldCtx::from_spec(spec)?;
    let mut rows = Vec::with_capacity(ctx.size() as usize);
    for x in std::iter::once(Elem::ZERO).chain((0..ctx.order()).map(|k| ctx.exp(k))) {
        let value: CycInt = kloosterman_full(&ctx, x)?;
        if value != value.conj() {
            return Err(Error::Invariant(format!("K({}) = {value} is not real", x.value())).into());
        }
        rows.push(KloostermanRow {
            alpha_log: ctx.log(x).map_or("zero".into(), |k| k.to_string()),
            value_coeffs: value.to_string(),
            value_approx: args.approx.then(|| value.to_complex().re),
        });
    }
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| io_failure(path, e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let target = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("<stdout>"));
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for row in &rows {
                w.serialize(row).map_err(|e| io_failure(&target, e))?;
            }
            w.flush().map_err(|e| io_failure(&target, e))?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &rows).map_err(|e| io_failure(&target, e))?;
            writeln!(sink).map_err(|e| io_failure(&target, e))?;
        }
    }
    Ok(0)
}

fn verify(args: &VerifyArgs) -> CmdResult {
    let path = &args.function;
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let file: DillonFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: parse error: {e}", path.display())))?;
    let (ctx, f) = DillonFunction::from_file(&file)?;
    let table = f.truth_table(&ctx)?;
    let spectrum = is_bent(&ctx, &table)?;
    let s = f.unit_circle_sum(&ctx)?;

    let verdict = match (spectrum.is_bent, spectrum.is_regular) {
        (true, true) => "regular bent",
        (true, false) => "bent, not regular",
        _ => "not bent",
    };
    println!("field: F_{}^{}", ctx.p(), ctx.n());
    println!("verdict: {verdict}");
    print!("S = {s}");
    if args.approx {
        let z = s.to_complex();
        print!("  ({:.6} {:+.6}i)", z.re, z.im);
    }
    println!();

    let target = ctx.size() as i64;
    let flat = spectrum
        .values
        .iter()
        .filter(|w| w.norm_sq().as_integer() == Some(target))
        .count();
    let max_abs = spectrum
        .values
        .iter()
        .map(|w| w.to_complex().norm())
        .fold(0.0f64, f64::max);
    println!(
        "spectrum: {flat}/{} points with |W|^2 = {target}; max |W| = {max_abs:.6}",
        spectrum.values.len()
    );
    Ok(if spectrum.is_bent { 0 } else { EXIT_NEGATIVE })
}

fn b_range(arg: BRange, degree: u32) -> SlotRange {
    match arg {
        BRange::Zero => SlotRange::Fixed { value: Elem::ZERO },
        BRange::Nonzero => SlotRange::nonzero(degree),
        BRange::All => SlotRange::Subfield {
            degree,
            include_zero: true,
        },
    }
}

fn need(v: Option<u64>, flag: &str, family: &str) -> Result<u64, Failure> {
    v.ok_or_else(|| usage(format!("family {family} needs --{flag}")))
}

fn family_template(args: &SearchArgs, family: FamilyArg, ctx: &FieldCtx) -> Result<FamilyTemplate, Failure> {
    let m = ctx
        .m()
        .ok_or_else(|| usage(format!("field degree {} is odd", ctx.n())))?;
    Ok(match family {
        FamilyArg::B1 => {
            let d = need(args.d, "d", "b1")?;
            let o = o_of_d(ctx.p(), ctx.n(), d)?;
            FamilyTemplate::B1 {
                d,
                l: need(args.l, "l", "b1")?,
                a0: SlotRange::nonzero(m),
                a1: SlotRange::nonzero(m),
                b: b_range(args.b, o),
                distinct: args.distinct,
            }
        }
        FamilyArg::B2 => FamilyTemplate::B2 {
            r: need(args.r, "r", "b2")?,
            s: need(args.s, "s", "b2")?,
            a: SlotRange::nonzero(ctx.n()),
        },
        FamilyArg::P1 => FamilyTemplate::P1 {
            l: need(args.l, "l", "p1")?,
            a: SlotRange::nonzero(ctx.n()),
            b: b_range(args.b, 2),
            exponent: args.exponent,
        },
        FamilyArg::P2 => FamilyTemplate::P2 {
            r: need(args.r, "r", "p2")?,
            s: need(args.s, "s", "p2")?,
            a: SlotRange::nonzero(ctx.n()),
            b: b_range(args.b, 1),
        },
    })
}

fn configure(job: &mut SearchJob, args: &SearchArgs) {
    job.cap = args.cap;
    job.dedupe = args.dedupe;
    if let Some(tol) = args.tol {
        job.tolerance = tol;
    }
}

fn write_outcome(outcome: &SearchOutcome, format: Format, path: &Path) -> Result<(), Failure> {
    persist(&outcome.records, &outcome.summary, format.into(), path)?;
    eprintln!(
        "wrote {} and {}",
        path.display(),
        summary_path(path).display()
    );
    Ok(())
}

fn print_summary(outcome: &SearchOutcome) {
    let s = &outcome.summary;
    println!(
        "records={} bent={} regular={} disagreements={} wall_time_ms={}",
        s.total, s.bent, s.regular, s.disagreements, s.wall_time_ms
    );
    if !s.disagreement_indices.is_empty() {
        println!("disagreement indices: {:?}", s.disagreement_indices);
    }
}

fn search(args: &SearchArgs) -> CmdResult {
    if let Some(name) = &args.golden {
        return search_golden(args, name);
    }
    let family = args.family.ok_or_else(|| usage("give --family or --golden"))?;
    let spec = field_spec(&args.field)?;
    let ctx = FieldCtx::from_spec(spec.clone())?;
    let mut job = SearchJob::new(spec, family_template(args, family, &ctx)?);
    configure(&mut job, args);
    let start = Instant::now();
    let outcome = run_job(&job, args.threads)?;
    print_summary(&outcome);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    if let Some(path) = &args.out {
        write_outcome(&outcome, args.format, path)?;
    }
    Ok(0)
}

fn variant_path(base: &Path, label: &str) -> PathBuf {
    let tag: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    let stem = base.file_stem().unwrap_or_default().to_string_lossy();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    base.with_file_name(name)
}

fn search_golden(args: &SearchArgs, name: &str) -> CmdResult {
    let mut preset = golden_preset(name)?;
    for (_, job) in &mut preset.jobs {
        configure(job, args);
    }
    println!("{}: {}", preset.name, preset.description);
    let report = run_golden(&preset, args.threads)?;
    let single = report.runs.len() == 1;
    for run in &report.runs {
        let s = &run.outcome.summary;
        let count = match report.measure {
            GoldenMeasure::UnorderedBentPairs => format!(
                "bent={} (unordered pairs; ordered={}, symmetric={})",
                run.observed,
                s.bent,
                run.symmetric.unwrap_or(false)
            ),
            GoldenMeasure::BentRecords => format!("bent={} regular={}", s.bent, s.regular),
            GoldenMeasure::RegularRecords => format!("bent={} regular={}", s.bent, run.observed),
        };
        println!(
            "[{}] {count} records={} disagreements={} wall_time_ms={}",
            run.label, s.total, s.disagreements, s.wall_time_ms
        );
        if let Some(path) = &args.out {
            let path = if single {
                path.clone()
            } else {
                variant_path(path, &run.label)
            };
            write_outcome(&run.outcome, args.format, &path)?;
        }
    }
    if report.matched.is_empty() {
        println!("expected {}: no variant matched", report.expected);
    } else {
        println!("expected {}: matched by {}", report.expected, report.matched.join(", "));
    }
    if report.pass {
        println!("golden {}: PASS", report.name);
        Ok(0)
    } else {
        println!(
            "golden {}: FAIL ({} disagreements)",
            report.name, report.disagreements
        );
        Ok(EXIT_NEGATIVE)
    }
}

fn check(args: &CheckArgs) -> CmdResult {
    if !CHECK_IDS.contains(&args.id.as_str()) {
        return Err(usage(format!(
            "unknown check '{}' (expected one of {})",
            args.id,
            CHECK_IDS.join(", ")
        )));
    }
    let n = match (args.n, args.m) {
        (Some(n), _) => n,
        (None, Some(m)) => 2 * m,
        (None, None) => return Err(usage("give --n or --m")),
    };
    let report = run_check(&args.id, args.p, n, args.threads)?;
    println!(
        "check {} over F_{}^{}: {} cases, {} failures",
        report.id,
        report.field.0,
        report.field.1,
        report.cases,
        report.failures.len()
    );
    for f in &report.failures {
        println!("  FAIL {f}");
    }
    if report.passed() {
        println!("pass");
        Ok(0)
    } else {
        println!("fail");
        Ok(EXIT_NEGATIVE)
    }
}
