//! The `practium` command line.
//!
//! Numeric arguments accept expressions such as `2^316+2` or `10^5`. Output
//! is JSON by default; `--format plain` gives a short human summary and
//! `--format csv` is available for `stable`, `scan` and `sieve`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::certificate::{CertificateError, CertificateFile, FormatError, VerifyMode};
use crate::expr::parse_natural;
use crate::factorization::{read_hints_file, FactorError, FactorOptions, HintsError};
use crate::families::{
    decimal_digits, power_two_exponent, power_two_members, pythagorean_family,
    quadratic_family_stream, FamilyError, QuadraticFamily,
};
use crate::practical::{decide_partial, is_practical, practical_sieve};
use crate::search::report::{s_table_csv, Report};
use crate::search::{count_practical, run_scan, s_table, ScanKind, ScanState, SearchError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_CANT_CREATE: i32 = 73;
pub const EXIT_IO: i32 = 74;

const EXIT_CODES: &str = "\
Exit codes:
  0   success; the number is practical / the certificate verifies / the scan found what it looks for
  1   definitive negative: not practical, certificate rejected, counterexample found, or no example found
  2   undecided: the factoring budget ran out
  64  usage error: bad arguments, unparsable expression, parameter out of range
  65  malformed input file (certificate, hints or checkpoint)
  66  input file could not be read
  70  internal consistency failure (a family member failed its own certificate)
  73  checkpoint or certificate file could not be written
  74  writing output failed";

#[derive(Debug, Parser)]
#[command(
    name = "practium",
    version,
    about = "Practical numbers: tests, certificates and tables"
)]
#[command(after_help = EXIT_CODES)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Pollard rho iteration budget per cofactor.
    #[arg(long, global = true, value_parser = parse_u64)]
    budget: Option<u64>,
    /// Factor hints, one decimal per line.
    #[arg(long, global = true, env = "PRACTIUM_HINTS")]
    hints: Option<PathBuf>,
    /// Record wall-clock time in `runtime_ms` (output is then not reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a number is practical.
    Check {
        /// e.g. `2^36+2`
        expression: String,
    },
    /// Members of S_b: c <= c_max with n^2 + bn + c practical for some 2 <= n <= n_max.
    Stable(StableArgs),
    /// Members of an infinite family, each with a certificate.
    Family {
        #[command(subcommand)]
        kind: FamilyKind,
    },
    /// Practical Pythagorean triple with gcd d at generation k.
    Triple {
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        #[arg(long, value_parser = parse_u32)]
        k: u32,
    },
    /// Verify a certificate file.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
    },
    /// Bounded conjecture scan.
    Scan(ScanArgs),
    /// Count practical numbers up to each x.
    Density {
        #[arg(long = "x", required = true, value_parser = parse_u64)]
        xs: Vec<u64>,
    },
    /// List practical numbers up to a limit.
    Sieve {
        #[arg(long, value_parser = parse_u64)]
        limit: u64,
    },
}

#[derive(Debug, Args)]
struct StableArgs {
    #[arg(long, value_parser = parse_u64)]
    b: u64,
    #[arg(long, default_value = "100", value_parser = parse_u64)]
    c_max: u64,
    #[arg(long, default_value = "20000", value_parser = parse_u64)]
    n_max: u64,
}

#[derive(Debug, Subcommand)]
enum FamilyKind {
    /// n_{i+1} = n_i + f(n_i) for f(n) = n^2 + bn + c, starting from a practical f(seed).
    Quadratic {
        #[arg(long, value_parser = parse_big)]
        b: BigUint,
        #[arg(long, value_parser = parse_big)]
        c: BigUint,
        #[arg(long, value_parser = parse_big)]
        seed: BigUint,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=24))]
        count: u32,
    },
    /// m_k = 2^(35*3^k+1) + 2 for k = 0..=K.
    PowerTwo {
        #[arg(long, value_parser = parse_u32)]
        k: u32,
        /// Write the certificate of m_K here.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Weak,
    Strong,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(long, value_parser = parse_u64)]
    limit: Option<u64>,
    /// Rewrite this file with a partial report every 10^4 candidates.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a partial report.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Goldbach,
    Twin,
    Sun,
    OddPrime,
}

impl From<Which> for ScanKind {
    fn from(w: Which) -> Self {
        match w {
            Which::Goldbach => ScanKind::Goldbach,
            Which::Twin => ScanKind::Twin,
            Which::Sun => ScanKind::Sun,
            Which::OddPrime => ScanKind::OddPrime,
        }
    }
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    parse_natural(s).map_err(|e| e.to_string())
}

fn parse_u64(s: &str) -> Result<u64, String> {
    parse_big(s)?
        .to_u64()
        .ok_or_else(|| format!("{s} does not fit in 64 bits"))
}

fn parse_u32(s: &str) -> Result<u32, String> {
    u32::try_from(parse_u64(s)?).map_err(|_| format!("{s} does not fit in 32 bits"))
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn factor_failure(e: FactorError) -> Failure {
    match e {
        FactorError::BudgetExhausted(_) => fail(EXIT_UNDECIDED, e),
        other => fail(EXIT_USAGE, other),
    }
}

fn family_failure(e: FamilyError) -> Failure {
    match e {
        FamilyError::FactoringRequired(f) => factor_failure(f),
        FamilyError::SeedNotPractical { .. } | FamilyError::BaseNotPractical(_) => {
            fail(EXIT_FALSE, e)
        }
        FamilyError::Certificate { .. } => fail(EXIT_INTERNAL, e),
        _ => fail(EXIT_USAGE, e),
    }
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::CheckpointMismatch { .. } => fail(EXIT_DATA, e),
        _ => fail(EXIT_USAGE, e),
    }
}

/// What a subcommand produced: a report, its plain rendering, an optional
/// CSV rendering and the exit code.
struct Outcome {
    report: Report,
    plain: String,
    csv: Option<String>,
    code: i32,
}

impl Outcome {
    fn new(report: Report, plain: String, code: i32) -> Self {
        Outcome {
            report,
            plain,
            csv: None,
            code,
        }
    }
}

struct Context {
    opts: FactorOptions,
}

fn load_options(cli: &Cli) -> Result<FactorOptions, Failure> {
    let mut opts = FactorOptions::default();
    if let Some(b) = cli.budget {
        if b < 10_000 {
            return Err(fail(
                EXIT_USAGE,
                format!("--budget must be at least 10^4, got {b}"),
            ));
        }
        opts.budget = b;
    }
    if let Some(path) = &cli.hints {
        opts.hints = read_hints_file(path).map_err(|e| match e {
            HintsError::Io(_) => fail(EXIT_NO_INPUT, format!("{}: {e}", path.display())),
            HintsError::Parse { .. } => fail(EXIT_DATA, format!("{}: {e}", path.display())),
        })?;
    }
    Ok(opts)
}

fn cmd_check(ctx: &Context, expression: &str) -> Result<Outcome, Failure> {
    let n = parse_natural(expression).map_err(|e| fail(EXIT_USAGE, e))?;
    let params = json!({ "expression": expression });
    match ctx.opts.factor(&n) {
        Ok(f) => {
            let verdict = is_practical(&f);
            let plain = format!(
                "{expression} = {f}: {}\n",
                if verdict.practical {
                    "practical"
                } else {
                    "not practical"
                }
            );
            let code = if verdict.practical {
                EXIT_OK
            } else {
                EXIT_FALSE
            };
            let report = Report::new("check", params, &verdict)
                .with_witnesses(json!({ "factorization": f.to_string() }));
            Ok(Outcome::new(report, plain, code))
        }
        Err(FactorError::BudgetExhausted(partial)) => {
            let residue = json!({
                "primes": partial.primes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "composites": partial.composites.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            if let Some(verdict) = decide_partial(&partial) {
                let plain =
                    format!("{expression}: not practical (unsplit cofactors are too large)\n");
                let report = Report::new("check", params, &verdict).with_witnesses(residue);
                return Ok(Outcome::new(report, plain, EXIT_FALSE));
            }
            let report = Report::new(
                "check",
                params,
                json!({ "value": n.to_string(), "practical": null, "method": "stewart" }),
            )
            .with_witnesses(residue);
            let plain = format!(
                "{expression}: undecided, {} composite cofactor(s) left unsplit\n",
                partial.composites.len()
            );
            Ok(Outcome::new(report, plain, EXIT_UNDECIDED))
        }
        Err(e) => Err(factor_failure(e)),
    }
}

fn cmd_stable(args: &StableArgs) -> Result<Outcome, Failure> {
    let t = s_table(args.b, args.c_max, args.n_max).map_err(search_failure)?;
    let non_members = t.non_members();
    let plain = format!(
        "S_{} (c <= {}, n <= {}): {} members\nmembers: {:?}\nnon-members: {:?}\n",
        t.b,
        t.c_max,
        t.n_max,
        t.members.len(),
        t.members,
        non_members
    );
    let report = Report::new(
        "stable",
        json!({ "b": t.b, "c_max": t.c_max, "n_max": t.n_max }),
        json!({
            "members": t.members,
            "non_members": non_members,
            "obstructed": t.obstructed,
        }),
    )
    .with_witnesses(&t.witnesses);
    let mut out = Outcome::new(report, plain, EXIT_OK);
    out.csv = Some(s_table_csv(&t));
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)
        .and_then(|()| std::fs::rename(&tmp, path))
        .map_err(|e| fail(EXIT_CANT_CREATE, format!("{}: {e}", path.display())))
}

fn cmd_family(ctx: &Context, kind: &FamilyKind) -> Result<Outcome, Failure> {
    match kind {
        FamilyKind::Quadratic { b, c, seed, count } => {
            let fam = QuadraticFamily::new(b.clone(), c.clone()).map_err(family_failure)?;
            let stream = quadratic_family_stream(&fam, seed, &ctx.opts).map_err(family_failure)?;
            let mut rows = Vec::new();
            let mut certs = Vec::new();
            let mut plain = String::new();
            for (n, cert) in stream.take(*count as usize) {
                cert.verify(VerifyMode::Weak)
                    .map_err(|e| fail(EXIT_INTERNAL, e))?;
                plain.push_str(&format!(
                    "n = {n}: f(n) has {} digits, chain length {}\n",
                    decimal_digits(cert.target()),
                    cert.chain().len()
                ));
                rows.push(json!({
                    "n": n.to_string(),
                    "value": cert.target().to_string(),
                    "chain_length": cert.chain().len(),
                }));
                certs.push(cert);
            }
            let report = Report::new(
                "family",
                json!({
                    "kind": "quadratic",
                    "b": b.to_string(),
                    "c": c.to_string(),
                    "seed": seed.to_string(),
                    "count": count,
                }),
                rows,
            )
            .with_witnesses(&certs);
            Ok(Outcome::new(report, plain, EXIT_OK))
        }
        FamilyKind::PowerTwo { k, cert_out } => {
            let members = power_two_members(*k, &ctx.opts).map_err(family_failure)?;
            let mut rows = Vec::new();
            let mut plain = String::new();
            for m in &members {
                let e = power_two_exponent(m.k).map_err(family_failure)?;
                plain.push_str(&format!(
                    "m_{} = 2^{e}+2: practical ({} multipliers)\n",
                    m.k,
                    m.certificate.chain().len()
                ));
                rows.push(json!({
                    "k": m.k,
                    "expression": format!("2^{e}+2"),
                    "digits": decimal_digits(&m.value),
                    "chain_length": m.certificate.chain().len(),
                    "practical": true,
                }));
            }
            if let Some(path) = cert_out {
                let last = members.last().expect("k + 1 members");
                write_file(path, &last.certificate.to_text())?;
            }
            let certs: Vec<_> = members.iter().map(|m| &m.certificate).collect();
            let report = Report::new("family", json!({ "kind": "power-two", "k": k }), rows)
                .with_witnesses(certs);
            Ok(Outcome::new(report, plain, EXIT_OK))
        }
    }
}

fn cmd_triple(ctx: &Context, d: u64, k: u32) -> Result<Outcome, Failure> {
    let t = pythagorean_family(d, k, &ctx.opts).map_err(family_failure)?;
    let plain = format!(
        "({}, {}, {}): gcd {d}, a^2 + b^2 = c^2, all three certified practical\n",
        t.forms[0], t.forms[1], t.forms[2]
    );
    let report = Report::new(
        "triple",
        json!({ "d": d, "k": k }),
        json!({
            "a": t.a.to_string(),
            "b": t.b.to_string(),
            "c": t.c.to_string(),
            "forms": t.forms,
            "gcd": d,
            "identity": true,
            "certified": true,
        }),
    )
    .with_witnesses(&t.certificates);
    Ok(Outcome::new(report, plain, EXIT_OK))
}

fn cmd_certify(ctx: &Context, file: &Path, mode: Mode) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", file.display())))?;
    let parsed = CertificateFile::parse(&text).map_err(|e| fail(EXIT_DATA, e))?;
    let mode_name = match mode {
        Mode::Weak => "weak",
        Mode::Strong => "strong",
    };
    let params = json!({ "file": file.display().to_string(), "mode": mode_name });
    let result = parsed.clone().into_certificate(&ctx.opts).and_then(|cert| {
        let m = match mode {
            Mode::Weak => VerifyMode::Weak,
            Mode::Strong => VerifyMode::Strong,
        };
        cert.verify_with(m, &ctx.opts)
            .map_err(FormatError::Certificate)
    });
    let (code, error) = match result {
        Ok(()) => (EXIT_OK, None),
        Err(FormatError::Factor(e @ FactorError::BudgetExhausted(_)))
        | Err(FormatError::Certificate(CertificateError::FactoringRequired {
            source: e @ FactorError::BudgetExhausted(_),
            ..
        })) => (EXIT_UNDECIDED, Some(e.to_string())),
        Err(FormatError::Factor(e)) => return Err(factor_failure(e)),
        Err(e) => (EXIT_FALSE, Some(e.to_string())),
    };
    let plain = match &error {
        None => format!(
            "valid: target with {} digits, {} multipliers\n",
            decimal_digits(&parsed.target),
            parsed.chain.len()
        ),
        Some(e) => format!("rejected: {e}\n"),
    };
    let report = Report::new(
        "certify",
        params,
        json!({
            "valid": code == EXIT_OK,
            "target": parsed.target.to_string(),
            "chain_length": parsed.chain.len(),
            "error": error,
        }),
    );
    Ok(Outcome::new(report, plain, code))
}

fn scan_report(state: &ScanState, partial: bool) -> Report {
    Report::new(
        "scan",
        json!({ "which": state.kind.name(), "limit": state.limit }),
        state,
    )
    .partial(partial)
}

fn read_checkpoint(path: &Path, kind: ScanKind, limit: Option<u64>) -> Result<ScanState, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", path.display())))?;
    let report = Report::from_json(&text)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let state: ScanState = serde_json::from_value(report.result)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    if state.kind != kind {
        return Err(search_failure(SearchError::CheckpointMismatch {
            expected: kind.name().into(),
            found: state.kind.name().into(),
        }));
    }
    if let Some(limit) = limit {
        if limit != state.limit {
            return Err(search_failure(SearchError::CheckpointMismatch {
                expected: format!("limit {limit}"),
                found: format!("limit {}", state.limit),
            }));
        }
    }
    Ok(state)
}

fn cmd_scan(args: &ScanArgs) -> Result<Outcome, Failure> {
    let kind = ScanKind::from(args.which);
    let start = match &args.resume {
        Some(path) => read_checkpoint(path, kind, args.limit)?,
        None => {
            let limit = args
                .limit
                .ok_or_else(|| fail(EXIT_USAGE, "--limit is required unless resuming"))?;
            ScanState::new(kind, limit)
        }
    };
    let mut write_error = None;
    let mut on_checkpoint = |s: &ScanState| {
        if let Some(path) = &args.checkpoint {
            if write_error.is_none() {
                write_error = write_file(path, &scan_report(s, true).to_json()).err();
            }
        }
    };
    let done = run_scan(start, &mut on_checkpoint).map_err(search_failure)?;
    if let Some(e) = write_error {
        return Err(e);
    }
    if let Some(path) = &args.checkpoint {
        write_file(path, &scan_report(&done, false).to_json())?;
    }
    let success = if kind.reports_failures() {
        done.hits.is_empty()
    } else {
        !done.hits.is_empty()
    };
    let label = if kind.reports_failures() {
        "counterexamples"
    } else {
        "hits"
    };
    let plain = format!(
        "{} up to {}: {} {label}{}\n",
        kind.name(),
        done.limit,
        done.hits.len(),
        if done.hits.is_empty() {
            String::new()
        } else {
            format!(", first {:?}", &done.hits[..done.hits.len().min(20)])
        }
    );
    let csv = std::iter::once("m".to_string())
        .chain(done.hits.iter().map(u64::to_string))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    let mut out = Outcome::new(
        scan_report(&done, false),
        plain,
        if success { EXIT_OK } else { EXIT_FALSE },
    );
    out.csv = Some(csv);
    Ok(out)
}

fn cmd_density(xs: &[u64]) -> Result<Outcome, Failure> {
    let points = xs
        .iter()
        .map(|&x| count_practical(x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(search_failure)?;
    let ratios: Vec<f64> = points.iter().map(|p| p.ratio).collect();
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let spread = ((max / min) * 1e6).round() / 1e6;
    let mut plain = String::from("x\tP(x)\tP(x) ln x / x\n");
    for p in &points {
        plain.push_str(&format!("{}\t{}\t{:.6}\n", p.x, p.count, p.ratio));
    }
    plain.push_str(&format!("max/min ratio: {spread:.6}\n"));
    let report = Report::new(
        "density",
        json!({ "x": xs }),
        json!({ "points": points, "max_over_min": spread }),
    );
    Ok(Outcome::new(report, plain, EXIT_OK))
}

fn cmd_sieve(limit: u64) -> Result<Outcome, Failure> {
    let list = practical_sieve(limit).map_err(|e| fail(EXIT_USAGE, e))?;
    let plain = list
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
        + "\n";
    let csv = std::iter::once("n".to_string())
        .chain(list.iter().map(u64::to_string))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    let report = Report::new(
        "sieve",
        json!({ "limit": limit }),
        json!({ "count": list.len(), "numbers": list }),
    );
    let mut out = Outcome::new(report, plain, EXIT_OK);
    out.csv = Some(csv);
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Context {
        opts: load_options(cli)?,
    };
    match &cli.command {
        Command::Check { expression } => cmd_check(&ctx, expression),
        Command::Stable(args) => cmd_stable(args),
        Command::Family { kind } => cmd_family(&ctx, kind),
        Command::Triple { d, k } => cmd_triple(&ctx, *d, *k),
        Command::Certify { file, mode } => cmd_certify(&ctx, file, *mode),
        Command::Scan(args) => cmd_scan(args),
        Command::Density { xs } => cmd_density(xs),
        Command::Sieve { limit } => cmd_sieve(*limit),
    }
}

/// Run with explicit arguments (including the program name) and sinks.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    if cli.workers == Some(0) {
        let _ = writeln!(err, "error: --workers must be at least 1");
        return EXIT_USAGE;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let started = Instant::now();
    let outcome = pool.install(|| dispatch(&cli));
    let mut outcome = match outcome {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    if cli.timing {
        outcome.report.runtime_ms = Some(started.elapsed().as_millis() as u64);
    }
    let text = match cli.format {
        Format::Json => outcome.report.to_json(),
        Format::Plain => outcome.plain,
        Format::Csv => match outcome.csv {
            Some(csv) => csv,
            None => {
                let _ = writeln!(
                    err,
                    "error: csv output is available for stable, scan and sieve only"
                );
                return EXIT_USAGE;
            }
        },
    };
    if out
        .write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .is_err()
    {
        return EXIT_IO;
    }
    outcome.code
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
