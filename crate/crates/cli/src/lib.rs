//! Command-line driver: argument parsing, dispatch, report emission, the
//! exit-code protocol, and the on-disk constant caches.
//!
//! Exit codes: 0 — success, and every verification check passed;
//! 1 — a verification check failed, or evaluation hit an internal error;
//! 2 — usage error (bad flags, zero indices, unsupported precision);
//! 3 — a verdict was undecidable at the precision ceiling.

mod cache;
mod driver;
mod report;

pub use report::{
    CertifyReport, ClassifyReport, FailureDto, IntervalDto, MahlerCheckDto, MahlerReport,
    SumReport, TailReport, VerifyDto, WildReport,
};

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use sintail_core::{
    classify_with, enclosure_with_tail, mahler_check, verify_lemma_tame, verify_wild_growth,
    wild_up_to, Ctx, Engine, Error as CoreError, PartialSum, PrecisionBits, RationalApprox,
    TailBound, WildTable, DEFAULT_PRECISION_CEILING,
};

use report::{emit, Fmt};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 96;

/// The first continued-fraction convergents of π past its integer part —
/// the denominators that best approximate π at their size, and therefore
/// the sharpest finite test set for the irrationality-gap check.
pub const PI_CONVERGENTS: [(i64, i64); 5] = [
    (22, 7),
    (333, 106),
    (355, 113),
    (103993, 33102),
    (104348, 33215),
];

#[derive(Parser)]
#[command(
    name = "sintail",
    version,
    about = "Certified evaluation of the series sum over n of (2/3 + sin(n)/3)^n / n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working mantissa precision in bits (minimum 32)
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    /// Worker threads for chunked summation
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Directory for the constant caches (SINTAIL_CACHE_DIR overrides)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Report summation progress on standard error every million terms
    #[arg(long, global = true)]
    progress: bool,
}

/// Report format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// One machine-readable JSON object, newline-terminated.
    Json,
    /// Short plain-text lines.
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Interval arithmetic end to end; the result is a certified enclosure.
    Certified,
    /// Extended-precision point arithmetic with an attached error estimate.
    Fast,
}

impl EngineArg {
    fn to_core(self) -> Engine {
        match self {
            EngineArg::Certified => Engine::Certified,
            EngineArg::Fast => Engine::Fast,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sum the first N series terms
    Sum {
        /// Number of leading terms to sum
        #[arg(long)]
        terms: u64,
        /// Summation engine
        #[arg(long, value_enum, default_value_t = EngineArg::Fast)]
        engine: EngineArg,
    },
    /// Decide whether an index is tame or wild
    Classify {
        /// The index to classify
        n: u64,
    },
    /// Enumerate every wild number up to a limit
    Wild {
        /// Upper end of the scan (inclusive)
        #[arg(long)]
        limit: u64,
        /// Reuse and update the on-disk wild table
        #[arg(long)]
        cache: bool,
    },
    /// Run a verification sweep
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Bound the series tail after index N
    Tail {
        /// The index after which the tail starts
        #[arg(long)]
        after: u64,
    },
    /// Enclose the full series value from a certified prefix
    Certify {
        /// Number of prefix terms to certify
        #[arg(long)]
        terms: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the tame decay bound on every tame index in [1, N]
    Tame {
        /// Inclusive upper end of the sweep
        #[arg(long)]
        upto: u64,
    },
    /// Check wild-number growth on an enumerated table
    WildGrowth {
        /// Upper end of the wild scan (inclusive)
        #[arg(long)]
        limit: u64,
        /// Reuse and update the on-disk wild table
        #[arg(long)]
        cache: bool,
    },
    /// Check the irrationality gap of π on its convergents
    Mahler {
        /// How many convergents to test (1 through 5)
        #[arg(long, default_value_t = 5)]
        convergents: usize,
        /// Gap exponent e in the threshold 1/|q|^e
        #[arg(long, default_value_t = 20.0)]
        exponent: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::InvalidIndex(_)) => 2,
            CliError::Core(CoreError::BadPrecision(_)) => 2,
            CliError::Core(CoreError::UndecidableAtPrecision { .. }) => 3,
            _ => 1,
        }
    }
}

/// Parses `argv` and runs one command, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let p = PrecisionBits::new(cli.precision)?;
    let dir = cache::resolve_dir(cli.cache_dir.as_deref());
    let mut ctx = Ctx::new();
    cache::warm_pi(&mut ctx, &dir, err);
    let passed = dispatch(&cli, p, &dir, &mut ctx, out, err)?;
    cache::persist_pi(&ctx, &dir, err);
    Ok(passed)
}

fn dispatch(
    cli: &Cli,
    p: PrecisionBits,
    dir: &Path,
    ctx: &mut Ctx,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    let mut fmt = Fmt::new();
    match &cli.command {
        Command::Sum { terms, engine } => {
            let ps = run_sum(*terms, engine.to_core(), p, cli, ctx, err)?;
            emit(out, cli.output, &SumReport::new(&ps, cli.precision, &mut fmt))?;
            Ok(true)
        }
        Command::Classify { n } => {
            let c = classify_with(*n, p, DEFAULT_PRECISION_CEILING, ctx)?;
            emit(out, cli.output, &ClassifyReport::new(&c, &mut fmt))?;
            Ok(true)
        }
        Command::Wild { limit, cache } => {
            let table = load_wild(*limit, p, *cache, dir, ctx, err)?;
            emit(out, cli.output, &WildReport::new(&table, *cache))?;
            Ok(true)
        }
        Command::Verify { check } => match check {
            VerifyCommand::Tame { upto } => {
                let vr = verify_lemma_tame(1, *upto, p, ctx)?;
                emit(out, cli.output, &VerifyDto::new(&vr))?;
                Ok(vr.passed)
            }
            VerifyCommand::WildGrowth { limit, cache } => {
                let table = load_wild(*limit, p, *cache, dir, ctx, err)?;
                let vr = verify_wild_growth(&table, p, ctx)?;
                emit(out, cli.output, &VerifyDto::new(&vr))?;
                Ok(vr.passed)
            }
            VerifyCommand::Mahler {
                convergents,
                exponent,
            } => {
                if *convergents == 0 || *convergents > PI_CONVERGENTS.len() {
                    return Err(CliError::Usage(format!(
                        "--convergents must be between 1 and {}",
                        PI_CONVERGENTS.len()
                    )));
                }
                let mut outcomes = Vec::with_capacity(*convergents);
                for &(num, den) in &PI_CONVERGENTS[..*convergents] {
                    outcomes.push(mahler_check(
                        RationalApprox { p: num, q: den },
                        *exponent,
                        p,
                        ctx,
                    )?);
                }
                let rep = MahlerReport::new(&outcomes, &mut fmt);
                let passed = rep.passed;
                emit(out, cli.output, &rep)?;
                Ok(passed)
            }
        },
        Command::Tail { after } => {
            let tb = TailBound::new(*after, p, ctx)?;
            emit(out, cli.output, &TailReport::new(&tb, cli.precision, &mut fmt))?;
            Ok(true)
        }
        Command::Certify { terms } => {
            let ps = run_sum(*terms, Engine::Certified, p, cli, ctx, err)?;
            let tb = TailBound::new(*terms, p, ctx)?;
            let enclosure = enclosure_with_tail(&ps, &tb, p)?;
            emit(
                out,
                cli.output,
                &CertifyReport::new(&ps, &tb, &enclosure, p, &mut fmt),
            )?;
            Ok(true)
        }
    }
}

fn run_sum(
    terms: u64,
    engine: Engine,
    p: PrecisionBits,
    cli: &Cli,
    ctx: &mut Ctx,
    err: &mut dyn Write,
) -> Result<PartialSum, CliError> {
    let mut progress: Box<dyn FnMut(u64) + '_> = if cli.progress {
        Box::new(|done| {
            let _ = writeln!(err, "summed {done} terms");
        })
    } else {
        Box::new(|_| {})
    };
    Ok(driver::partial_sum_parallel(
        terms,
        engine,
        p,
        cli.workers,
        ctx,
        &mut progress,
    )?)
}

/// Produces the wild table for `limit`, consulting the on-disk cache when
/// asked. A cache may seed the scan only when it was built at the same or
/// higher precision; otherwise the scan reruns and the file is replaced.
fn load_wild(
    limit: u64,
    p: PrecisionBits,
    use_cache: bool,
    dir: &Path,
    ctx: &mut Ctx,
    err: &mut dyn Write,
) -> Result<WildTable, CliError> {
    if !use_cache {
        return Ok(wild_up_to(limit, p, ctx)?);
    }
    let path = cache::wild_path(dir);
    match cache::read_wild(&path) {
        Ok(Some(file)) if file.bits >= p.bits() => {
            let file_p = PrecisionBits::new(file.bits)?;
            match WildTable::from_parts(file.limit, file_p, file.wilds) {
                Ok(table) if table.scan_limit() >= limit => {
                    let kept: Vec<u64> = table
                        .wilds()
                        .iter()
                        .copied()
                        .filter(|&w| w <= limit)
                        .collect();
                    return Ok(WildTable::from_parts(limit, file_p, kept)?);
                }
                Ok(mut table) => {
                    table.extend_to(limit, ctx)?;
                    write_wild_warned(&path, &table, err);
                    return Ok(table);
                }
                Err(e) => {
                    let _ = writeln!(err, "warning: ignoring wild cache {}: {e}", path.display());
                }
            }
        }
        Ok(Some(_)) => {
            // Cached at lower precision than requested: rescan at ours.
        }
        Ok(None) => {}
        Err(msg) => {
            let _ = writeln!(err, "warning: ignoring wild cache {}: {msg}", path.display());
        }
    }
    let table = wild_up_to(limit, p, ctx)?;
    write_wild_warned(&path, &table, err);
    Ok(table)
}

fn write_wild_warned(path: &Path, table: &WildTable, err: &mut dyn Write) {
    if let Err(e) = cache::write_wild(path, table) {
        let _ = writeln!(
            err,
            "warning: could not write wild cache {}: {e}",
            path.display()
        );
    }
}
