//! Command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::discrepancy::{self, Arithmetic, EXACT_MAX_POINTS};
use crate::error::{Error, Result};
use crate::genmat::{interlaced_sobol, truncate, GeneratingMatrixSet};
use crate::netverify::{self, Verdict};
use crate::pointgen::{
    corollary_pointset, digital_shift, parse_coordinate, parse_shift, sequence_points, DyadicPoint,
    PointFormat, PointGenerator, RationalPointSet,
};
use crate::walsh;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_UNVERIFIED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable forcing exact rational arithmetic.
pub const EXACT_ENV: &str = "HODISC_EXACT";

#[derive(Parser, Debug)]
#[command(
    name = "hodisc",
    version,
    about = "Higher order digital nets and their L2 discrepancy"
)]
pub struct Cli {
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print points, one per line
    Gen(GenArgs),
    /// L2 discrepancy of one point set
    Disc(DiscArgs),
    /// Prefix discrepancies of a sequence as CSV
    Scan(ScanArgs),
    /// Certify the independence condition for every m' up to m
    Verify(VerifyArgs),
    /// Dual net summary
    Dual(DualArgs),
    /// Walsh kernel coefficients r(k,l) as CSV
    Rtable(RtableArgs),
    /// Write generating matrices and metadata to a directory
    ExportMatrices(ExportArgs),
}

fn parse_format(s: &str) -> std::result::Result<PointFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct PointSource {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Interlacing factor [default: 5, or 3 with --count]
    #[arg(long)]
    pub alpha: Option<u32>,
    /// Net of 2^m points
    #[arg(long, conflicts_with = "count")]
    pub m: Option<u32>,
    /// Exactly N points from the propagation rule
    #[arg(long)]
    pub count: Option<u64>,
    /// Digital shift, comma-separated hex digits per coordinate
    #[arg(long)]
    pub shift: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: PointSource,
    #[arg(long, default_value = "dec", value_parser = parse_format)]
    pub format: PointFormat,
}

#[derive(Args, Debug)]
pub struct DiscArgs {
    #[command(flatten)]
    pub source: PointSource,
    /// Read points from a file instead of generating them
    #[arg(long, conflicts_with_all = ["m", "count"])]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "dec", value_parser = parse_format)]
    pub input_format: PointFormat,
    /// Exact rational arithmetic (at most 1024 points)
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 5)]
    pub alpha: u32,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long)]
    pub shift: Option<String>,
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    #[arg(long)]
    pub m: u32,
    /// Candidate quality parameter [default: construction bound]
    #[arg(long)]
    pub t: Option<u32>,
    /// Search node budget per m'
    #[arg(long, default_value_t = netverify::VERIFY_BUDGET)]
    pub budget: u64,
    /// Also report the smallest certified t at the largest m
    #[arg(long)]
    pub smallest: bool,
}

#[derive(Args, Debug)]
pub struct DualArgs {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    #[arg(long)]
    pub m: u32,
    /// Binary digits per frequency component [default: alpha m]
    #[arg(long)]
    pub digits: Option<usize>,
    /// Largest accepted dual dimension
    #[arg(long, default_value_t = netverify::DUAL_BUDGET_EXP)]
    pub budget_exp: u32,
    /// Print every dual element
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct RtableArgs {
    /// Indices k, l < 2^k
    #[arg(long, default_value_t = 3)]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub dir: PathBuf,
}

/// Parses `args` (program name first) and runs the command, writing
/// normal output to `out` (unless `--out` is given) and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let env_exact = std::env::var(EXACT_ENV).is_ok_and(|v| v == "1");
    let mut buf = Vec::new();
    let result = dispatch(&cli.command, env_exact, &mut buf);
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_UNVERIFIED,
                Error::InvalidInput(_) | Error::Parse(_) | Error::DimensionMismatch(_) => {
                    EXIT_USAGE
                }
                Error::Io(_) => EXIT_FAILURE,
            }
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &buf),
        None => out.write_all(&buf),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAILURE;
    }
    code
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: &Command, env_exact: bool, out: &mut Vec<u8>) -> Result<i32> {
    match cmd {
        Command::Gen(a) => gen(a, out),
        Command::Disc(a) => disc(a, a.exact || env_exact, out),
        Command::Scan(a) => scan(a, a.exact || env_exact, out),
        Command::Verify(a) => verify(a, out),
        Command::Dual(a) => dual(a, out),
        Command::Rtable(a) => rtable(a, out),
        Command::ExportMatrices(a) => export(a, out),
    }
}

fn check_s(s: usize) -> Result<()> {
    if s == 0 || s > 64 {
        return Err(Error::InvalidInput(format!("s = {s} outside 1..=64")));
    }
    Ok(())
}

fn net_matrices(s: usize, alpha: u32, m: u32) -> Result<GeneratingMatrixSet> {
    check_s(s)?;
    if m == 0 || m > 40 {
        return Err(Error::InvalidInput(format!("m = {m} outside 1..=40")));
    }
    interlaced_sobol(s, alpha, m as usize)
}

enum Generated {
    Dyadic(Vec<DyadicPoint>),
    // propagation rule: dyadic approximations plus the exact values
    Propagated(Vec<DyadicPoint>, RationalPointSet),
}

fn apply_shift(points: Vec<DyadicPoint>, shift: &Option<String>) -> Result<Vec<DyadicPoint>> {
    match shift {
        None => Ok(points),
        Some(spec) => {
            let sigma = parse_shift(spec)?;
            points.iter().map(|x| digital_shift(x, &sigma)).collect()
        }
    }
}

fn generate(src: &PointSource) -> Result<Generated> {
    check_s(src.s)?;
    match (src.m, src.count) {
        (Some(m), None) => {
            let alpha = src.alpha.unwrap_or(5);
            let g = net_matrices(src.s, alpha, m)?;
            let pts = PointGenerator::new(&g).points(1 << m)?;
            Ok(Generated::Dyadic(apply_shift(pts, &src.shift)?))
        }
        (None, Some(n)) => {
            if let Some(a) = src.alpha.filter(|&a| a != 3) {
                return Err(Error::InvalidInput(format!(
                    "--count uses an order 3 construction, got --alpha {a}"
                )));
            }
            let set = corollary_pointset(src.s, n)?;
            if src.shift.is_some() {
                Ok(Generated::Dyadic(apply_shift(set.points, &src.shift)?))
            } else {
                let exact = set.exact().clone();
                Ok(Generated::Propagated(set.points, exact))
            }
        }
        _ => Err(Error::InvalidInput(
            "give exactly one of --m or --count".into(),
        )),
    }
}

fn gen(a: &GenArgs, out: &mut Vec<u8>) -> Result<i32> {
    let pts = match generate(&a.source)? {
        Generated::Dyadic(p) | Generated::Propagated(p, _) => p,
    };
    for p in &pts {
        writeln!(out, "{}", p.format(a.format))?;
    }
    Ok(EXIT_OK)
}

fn read_points(path: &PathBuf, format: PointFormat) -> Result<RationalPointSet> {
    let text = fs::read_to_string(path)?;
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|c| parse_coordinate(c, format))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalPointSet::from_rationals(&rows)
}

fn arithmetic(exact: bool, n: usize) -> Result<Arithmetic> {
    if !exact {
        return Ok(Arithmetic::Float);
    }
    if n > EXACT_MAX_POINTS {
        return Err(Error::InvalidInput(format!(
            "exact arithmetic supports at most {EXACT_MAX_POINTS} points, got {n}"
        )));
    }
    Ok(Arithmetic::Exact)
}

fn disc(a: &DiscArgs, exact: bool, out: &mut Vec<u8>) -> Result<i32> {
    let l2 = match &a.input {
        Some(path) => {
            let set = read_points(path, a.input_format)?;
            discrepancy::l2_discrepancy_rational(&set, arithmetic(exact, set.len())?)?
        }
        None => match generate(&a.source)? {
            Generated::Dyadic(p) => discrepancy::l2_discrepancy(&p, arithmetic(exact, p.len())?)?,
            Generated::Propagated(_, set) => {
                discrepancy::l2_discrepancy_rational(&set, arithmetic(exact, set.len())?)?
            }
        },
    };
    writeln!(out, "{l2}")?;
    Ok(EXIT_OK)
}

fn scan(a: &ScanArgs, exact: bool, out: &mut Vec<u8>) -> Result<i32> {
    check_s(a.s)?;
    if a.nmax < 2 {
        return Err(Error::InvalidInput("--nmax must be >= 2".into()));
    }
    let pts = apply_shift(sequence_points(a.s, a.alpha, a.nmax as u64)?, &a.shift)?;
    let report = match arithmetic(exact, a.nmax)? {
        Arithmetic::Float => discrepancy::warnock_scan(pts, a.nmax)?,
        Arithmetic::Exact => discrepancy::warnock_scan_exact(&pts, a.nmax)?,
    };
    out.write_all(report.to_csv().as_bytes())?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut Vec<u8>) -> Result<i32> {
    let full = net_matrices(a.s, a.alpha, a.m)?;
    let formula = full.t_bound();
    let t = a.t.unwrap_or(formula);
    let first = t / a.alpha + 1;
    if first > a.m {
        return Err(Error::InvalidInput(format!(
            "no m' in {first}..={} with m' > t/alpha",
            a.m
        )));
    }
    writeln!(out, "s={} alpha={} t={t} formula_t={formula}", a.s, a.alpha)?;
    let mut code = EXIT_OK;
    for m in first..=a.m {
        let g = truncate(&full, m as usize)?;
        match netverify::verify_order_alpha(&g, a.alpha, t, a.budget)? {
            Verdict::Certified => writeln!(out, "m={m} certified")?,
            Verdict::Violated(w) => {
                writeln!(out, "m={m} violated {w}")?;
                return Ok(EXIT_VIOLATED);
            }
            Verdict::Unverified { nodes } => {
                writeln!(out, "m={m} unverified after {nodes} nodes")?;
                code = EXIT_UNVERIFIED;
            }
        }
    }
    if code == EXIT_OK {
        writeln!(out, "certified m={first}..={}", a.m)?;
    }
    if a.smallest {
        let g = truncate(&full, a.m as usize)?;
        let r = netverify::smallest_t(&g, a.alpha, formula, a.budget)?;
        match r.certified {
            Some(tc) => writeln!(
                out,
                "smallest certified t at m={}: {tc}{}",
                a.m,
                if r.undecided_below {
                    " (smaller undecided)"
                } else {
                    ""
                }
            )?,
            None => writeln!(out, "smallest certified t at m={}: none", a.m)?,
        }
    }
    Ok(code)
}

fn dual(a: &DualArgs, out: &mut Vec<u8>) -> Result<i32> {
    let g = net_matrices(a.s, a.alpha, a.m)?;
    let d = netverify::dual_enumerate(&g, a.digits, a.budget_exp)?;
    writeln!(
        out,
        "digits={} rank={} dimension={}",
        d.digits(),
        d.rank(),
        d.dimension()
    )?;
    for order in 1..=a.alpha.max(1) {
        match netverify::dual_min_weight(&d, order) {
            Some(w) => writeln!(out, "min_weight order {order}: {w}")?,
            None => writeln!(out, "min_weight order {order}: inf")?,
        }
    }
    if a.list {
        for k in d.iter_nonzero() {
            writeln!(out, "{k}")?;
        }
    }
    Ok(EXIT_OK)
}

fn rtable(a: &RtableArgs, out: &mut Vec<u8>) -> Result<i32> {
    if a.k > 12 {
        return Err(Error::InvalidInput(format!("--k {} exceeds 12", a.k)));
    }
    writeln!(out, "k,l,numerator,denominator")?;
    for k in 0..1u64 << a.k {
        for l in 0..1u64 << a.k {
            let (num, den) = walsh::r_coeff(k, l).fraction_strings();
            writeln!(out, "{k},{l},{num},{den}")?;
        }
    }
    Ok(EXIT_OK)
}

fn export(a: &ExportArgs, out: &mut Vec<u8>) -> Result<i32> {
    let g = net_matrices(a.s, a.alpha, a.m)?;
    g.export(&a.dir)?;
    writeln!(out, "wrote {} matrices to {}", g.s(), a.dir.display())?;
    Ok(EXIT_OK)
}
