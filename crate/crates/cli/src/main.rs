//! `virasoro`: command-line front end for the subalgebra toolkit.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use virasoro_core::classify::{classify_with_certificate, closure_check, SpanInput};
use virasoro_core::family::{bracket_residual, make_mu, SubalgebraDescriptor, BRACKET_TOL, DEFAULT_MU_TOL};
use virasoro_core::solver::{closed_form, solve_numeric, sweep_conjecture, SolutionSet, SolveOptions};
use virasoro_core::virasoro::{catalog, lift_3dim, lift_descriptor, FiniteSubalgebraDescriptor};
use virasoro_core::{build_subalgebra, Coefficient, Error, MuSignature, RVector};

const EXIT_VALIDATION: u8 = 1;
const EXIT_REJECTED: u8 = 2;
const EXIT_CERTIFICATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "virasoro", version, about = "Two-dimensional subalgebras of the Witt algebra and finite-dimensional subalgebras of the Virasoro algebra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Override the default tolerance of the command.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the JSON result to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build s(mu) = span{P D, Q D} and certify its bracket.
    Construct {
        /// A signature file or inline JSON {"n","k","r","a"}.
        #[arg(long)]
        mu: String,
    },
    /// Check that span{A, B} is closed under the bracket.
    Verify {
        /// A span file or inline JSON {"A","B"}.
        #[arg(long)]
        span: String,
    },
    /// Identify span{A, B} as z(m) or s(mu).
    Classify {
        #[arg(long)]
        span: String,
    },
    /// Find the projective points of V(r)^x.
    SolveVr {
        /// Exponent vector, e.g. 2,1,-1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        r: Vec<i64>,
        /// Leading positive entries; inferred from the signs when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        starts: Option<usize>,
        /// Use the closed forms (n <= 3) instead of the numeric search.
        #[arg(long)]
        closed: bool,
    },
    /// Search every case of the nonemptiness sweep for n in a range.
    Sweep {
        /// `N` or `LO..HI`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Central-extension data of s(mu) or the three-dimensional lift of z(m).
    Virasoro {
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        mu: Option<String>,
        /// Lift span{L_-m, L_0, L_m} instead.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// Central shift of the first generator.
        #[arg(long, default_value = "0")]
        alpha: String,
    },
    /// List the families of finite-dimensional subalgebras of one dimension.
    Catalog {
        #[arg(long)]
        dim: usize,
    },
}

/// A command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotClosed
            | Error::NotIndependent
            | Error::AbelianContradiction
            | Error::StructureViolation(_)
            | Error::NoConvergence { .. } => EXIT_REJECTED,
            Error::VerificationFailed(_)
            | Error::UncertifiedFactoring { .. }
            | Error::BoundExceeded { .. }
            | Error::ValidationFailed(_) => EXIT_CERTIFICATION,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::validation(format!("{e:#}"))
    }
}

/// Output of a successful command: the JSON value and its table rendering.
struct Output {
    json: Value,
    table: String,
}

type CmdResult = Result<Output, Failure>;

/// Reads `arg` as a file when it names one, otherwise as inline JSON.
fn read_json<T: for<'de> Deserialize<'de>>(arg: &str) -> anyhow::Result<T> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
}

#[derive(Deserialize)]
struct MuInput {
    n: usize,
    k: usize,
    r: Vec<i64>,
    a: Vec<Coefficient>,
}

fn read_mu(arg: &str, tol: f64) -> Result<MuSignature, Failure> {
    let m: MuInput = read_json(arg)?;
    Ok(make_mu(m.n, m.k, m.r, m.a, tol)?)
}

fn read_span(arg: &str, tol: Option<f64>) -> Result<SpanInput, Failure> {
    let mut span: SpanInput = read_json(arg)?;
    if let Some(t) = tol {
        span.tol = t;
    }
    if !(span.tol.is_finite() && span.tol > 0.0) {
        return Err(Error::BadTolerance(span.tol).into());
    }
    Ok(span)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn mu_line(mu: &MuSignature) -> String {
    let a: Vec<String> = mu.a().iter().map(Coefficient::to_string).collect();
    format!("mu = (n={}, k={}, r={}, a=({}))", mu.n(), mu.k(), mu.r(), a.join(", "))
}

fn descriptor_lines(d: &SubalgebraDescriptor) -> String {
    match d {
        SubalgebraDescriptor::Zm { m } => format!("z({m}) = span{{D, t^{m} D}}\n"),
        SubalgebraDescriptor::Smu { mu, p, q, c } => {
            format!("{}\nP = {p}\nQ = {q}\nc = {c}\n", mu_line(mu))
        }
    }
}

fn construct(g: &Global, mu: &str) -> CmdResult {
    let mu = read_mu(mu, g.tol.unwrap_or(DEFAULT_MU_TOL))?;
    let d = build_subalgebra(&mu)?;
    let SubalgebraDescriptor::Smu { p, q, c, .. } = &d else {
        unreachable!("build_subalgebra returns s(mu)")
    };
    let residual = bracket_residual(p, q, c)?;
    let mut json = to_value(&d);
    json["certificate"] = json!({
        "identity": "[P D, Q D] = c Q D",
        "exact": matches!(mu.backend(), virasoro_core::Backend::Exact),
        "residual": residual,
        "tol": BRACKET_TOL,
    });
    let table = format!("{}bracket residual {residual:.3e} (tol {BRACKET_TOL:e})\n", descriptor_lines(&d));
    Ok(Output { json, table })
}

fn verify(g: &Global, span: &str) -> CmdResult {
    let span = read_span(span, g.tol)?;
    let (alpha, beta) = closure_check(&span)?;
    let json = json!({"closed": true, "alpha": alpha, "beta": beta});
    let table = format!("closed: [A, B] = ({alpha}) A + ({beta}) B\n");
    Ok(Output { json, table })
}

fn classify_cmd(g: &Global, span: &str) -> CmdResult {
    let span = read_span(span, g.tol)?;
    let (d, cert) = classify_with_certificate(&span)?;
    let mut json = to_value(&d);
    json["certificate"] = to_value(&cert);
    let mut table = descriptor_lines(&d);
    let _ = writeln!(table, "eigenvalue {}", cert.eigenvalue);
    let _ = writeln!(table, "closure [A, B] = ({}) A + ({}) B", cert.closure[0], cert.closure[1]);
    let _ = writeln!(table, "residual {:.3e}", cert.residual);
    if let Some(r) = &cert.recovered {
        let _ = writeln!(table, "recovered n={} k={} r={:?}", r.n, r.k, r.r);
    }
    Ok(Output { json, table })
}

fn solve_options(g: &Global, starts: Option<usize>) -> SolveOptions {
    let mut opts = SolveOptions {
        starts,
        ..SolveOptions::default()
    };
    if let Some(s) = g.seed {
        opts.seed = s;
    }
    if let Some(t) = g.tol {
        opts.newton_tol = t;
    }
    opts
}

fn set_table(set: &SolutionSet) -> String {
    let mut out = format!("r = {}: {} of at most {} points", set.r, set.count(), set.bound());
    if set.complete {
        out.push_str(" (complete)");
    }
    out.push('\n');
    for s in &set.solutions {
        let a: Vec<String> = s.a.iter().map(Coefficient::to_string).collect();
        let _ = writeln!(out, "  ({})  residual {:.2e}  rank {}", a.join(", "), s.residual, s.jacobian_rank);
    }
    out
}

fn solve_vr(g: &Global, r: &[i64], k: Option<usize>, starts: Option<usize>, closed: bool) -> CmdResult {
    let r = match k {
        Some(k) => RVector::new(k, r.to_vec())?,
        None => RVector::from_entries(r.to_vec())?,
    };
    let opts = solve_options(g, starts);
    let set = if closed { closed_form(&r)? } else { solve_numeric(&r, &opts)? };
    let mut json = to_value(&set);
    let mut table = String::new();
    if !closed {
        json["seed"] = json!(opts.seed);
        let _ = writeln!(table, "seed {}", opts.seed);
    }
    table.push_str(&set_table(&set));
    Ok(Output { json, table })
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::validation(format!("expected N or LO..HI, got {s:?}"));
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((parse(lo)?, parse(hi)?))
        }
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

fn sweep(g: &Global, n: &str, starts: Option<usize>) -> CmdResult {
    let (lo, hi) = parse_range(n)?;
    let opts = solve_options(g, starts);
    if g.format == Format::Json {
        eprintln!("seed {}", opts.seed);
    }
    let report = sweep_conjecture(lo, hi, &opts)?;
    let table = format!("seed {}\n{}", opts.seed, report.summary_table());
    Ok(Output {
        json: to_value(&report),
        table,
    })
}

fn virasoro_cmd(g: &Global, mu: Option<&str>, m: Option<i64>, alpha: &str) -> CmdResult {
    let lift = match (mu, m) {
        (Some(mu), _) => {
            let mu = read_mu(mu, g.tol.unwrap_or(DEFAULT_MU_TOL))?;
            let alpha: Coefficient = alpha.parse()?;
            lift_descriptor(&build_subalgebra(&mu)?, &alpha)?
        }
        (None, Some(m)) => lift_3dim(m)?,
        (None, None) => return Err(Failure::validation("one of --mu or --m is required")),
    };
    if !lift.verify_closure()? {
        return Err(Error::VerificationFailed("lifted span does not close".into()).into());
    }
    let mut json = json!({"dim": lift.dim(), "closes": true, "lift": lift});
    let mut table = String::new();
    match &lift {
        FiniteSubalgebraDescriptor::Dim2c { mu, alpha, beta0: b } => {
            json["beta0"] = to_value(b);
            let _ = writeln!(table, "{}", mu_line(mu));
            let _ = writeln!(table, "beta0 = {b}");
            let _ = writeln!(table, "lift: span{{P D + ({alpha}) K, Q D + ({b}) K}}");
        }
        FiniteSubalgebraDescriptor::Dim2b { m, alpha } => {
            let _ = writeln!(table, "lift: span{{L_0 + ({alpha}) K, L_{m}}}");
        }
        FiniteSubalgebraDescriptor::Dim3a { m } => {
            let b = lift.dim3_beta().expect("Dim3a");
            json["beta"] = to_value(&b);
            let _ = writeln!(table, "lift: span{{L_{}, L_0 + ({b}) K, L_{m}}}", -m);
        }
        other => {
            let _ = writeln!(table, "lift: {}", serde_json::to_string(other).expect("serializable"));
        }
    }
    table.push_str("closes: true\n");
    Ok(Output { json, table })
}

fn catalog_cmd(dim: usize) -> CmdResult {
    let families = catalog(dim)?;
    let mut table = String::new();
    for f in &families {
        let _ = writeln!(table, "{:<6} {:<44} {}", f.family, f.span, f.parameters.join("; "));
    }
    Ok(Output {
        json: to_value(&families),
        table,
    })
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::BadTolerance(t).into());
        }
    }
    match &cli.command {
        Command::Construct { mu } => construct(g, mu),
        Command::Verify { span } => verify(g, span),
        Command::Classify { span } => classify_cmd(g, span),
        Command::SolveVr { r, k, starts, closed } => solve_vr(g, r, *k, *starts, *closed),
        Command::Sweep { n, starts } => sweep(g, n, *starts),
        Command::Virasoro { mu, m, alpha } => virasoro_cmd(g, mu.as_deref(), *m, alpha),
        Command::Catalog { dim } => catalog_cmd(*dim),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let json = serde_json::to_string_pretty(&out.json).expect("serializable");
            if let Some(path) = &cli.global.out {
                if let Err(e) = fs::write(path, format!("{json}\n")) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(EXIT_VALIDATION);
                }
            }
            let text = match cli.global.format {
                Format::Json => format!("{json}\n"),
                Format::Table => out.table,
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
