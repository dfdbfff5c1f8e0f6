//! Report types: the JSON schema of every subcommand plus a plain-text
//! rendering.
//!
//! JSON output is deterministic by construction — fixed field order
//! (declaration order), no timestamps or host details — so identical
//! invocations produce byte-identical reports. Interval endpoints are
//! printed twice: as decimal strings rendered with directed rounding (the
//! printed interval still encloses the computed one) and as the nearest
//! representable `f64` pair for quick consumption.

use std::io::{self, Write};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use serde::{Deserialize, Serialize};
use sintail_core::{
    f64_down, f64_up, Classification, Interval, MahlerOutcome, PartialSum, PrecisionBits,
    TailBound, VerifyReport, WildTable,
};

use crate::OutputFormat;

/// Radix-conversion state shared by all decimal renderings of one report.
pub struct Fmt {
    cc: Consts,
}

impl Fmt {
    pub fn new() -> Self {
        Fmt {
            // The substrate only fails here on allocation failure.
            cc: Consts::new().expect("constants cache allocation"),
        }
    }

    /// Decimal string of `x`, rounded in the direction `rm` so the printed
    /// digits never overstate the precision of an endpoint.
    fn decimal(&mut self, x: &BigFloat, rm: RoundingMode) -> String {
        x.format(Radix::Dec, rm, &mut self.cc)
            .unwrap_or_else(|_| String::from("?"))
    }
}

impl Default for Fmt {
    fn default() -> Self {
        Self::new()
    }
}

/// An interval's two endpoints as directed decimal strings plus the
/// nearest enclosing `f64` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDto {
    pub lo: String,
    pub hi: String,
    pub lo_f64: f64,
    pub hi_f64: f64,
}

impl IntervalDto {
    pub fn new(iv: &Interval, fmt: &mut Fmt) -> Self {
        IntervalDto {
            lo: fmt.decimal(iv.lo(), RoundingMode::Down),
            hi: fmt.decimal(iv.hi(), RoundingMode::Up),
            lo_f64: f64_down(iv.lo()),
            hi_f64: f64_up(iv.hi()),
        }
    }
}

/// Report of `sum --terms N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub command: String,
    pub terms: u64,
    pub engine: String,
    pub precision_bits: u32,
    pub value: IntervalDto,
    /// Fast engine only: worst-case estimate of |computed − true|.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
}

impl SumReport {
    pub fn new(ps: &PartialSum, precision_bits: u32, fmt: &mut Fmt) -> Self {
        SumReport {
            command: "sum".into(),
            terms: ps.upto_n,
            engine: ps.engine.to_string(),
            precision_bits,
            value: IntervalDto::new(&ps.value, fmt),
            error_estimate: ps.error_estimate,
        }
    }
}

/// Report of `classify N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub command: String,
    pub n: u64,
    pub verdict: String,
    /// Signed distance to the nearest peak center (midpoint, for reading).
    pub theta: f64,
    /// Wildness threshold 4/n^¼ (midpoint, for reading).
    pub threshold: f64,
    pub theta_enclosure: IntervalDto,
    pub threshold_enclosure: IntervalDto,
    /// Precision at which the verdict became certain.
    pub precision_bits: u32,
}

impl ClassifyReport {
    pub fn new(c: &Classification, fmt: &mut Fmt) -> Self {
        ClassifyReport {
            command: "classify".into(),
            n: c.n,
            verdict: c.verdict.to_string(),
            theta: midpoint_f64(&c.theta),
            threshold: midpoint_f64(&c.threshold),
            theta_enclosure: IntervalDto::new(&c.theta, fmt),
            threshold_enclosure: IntervalDto::new(&c.threshold, fmt),
            precision_bits: c.precision_used.bits(),
        }
    }
}

/// Report of `wild --limit N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WildReport {
    pub command: String,
    pub limit: u64,
    pub precision_bits: u32,
    pub count: u64,
    /// The k-th entry (1-based) is the k-th smallest wild number.
    pub wilds: Vec<u64>,
    pub cache_used: bool,
}

impl WildReport {
    pub fn new(table: &WildTable, cache_used: bool) -> Self {
        WildReport {
            command: "wild".into(),
            limit: table.scan_limit(),
            precision_bits: table.precision_used().bits(),
            count: table.count(),
            wilds: table.wilds().to_vec(),
            cache_used,
        }
    }
}

/// One certified counterexample inside a verification sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDto {
    pub at: u64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Report of `verify tame` and `verify wild-growth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDto {
    pub command: String,
    pub check: String,
    pub range: (u64, u64),
    pub passed: bool,
    pub failures: Vec<FailureDto>,
    pub min_slack: Option<f64>,
    pub min_slack_at: Option<u64>,
    pub precision_bits: u32,
    pub checked: u64,
    pub skipped: u64,
}

impl VerifyDto {
    pub fn new(vr: &VerifyReport) -> Self {
        VerifyDto {
            command: "verify".into(),
            check: vr.check.into(),
            range: vr.range,
            passed: vr.passed,
            failures: vr
                .failures
                .iter()
                .map(|f| FailureDto {
                    at: f.at,
                    lhs: f.lhs,
                    rhs: f.rhs,
                })
                .collect(),
            min_slack: vr.min_slack,
            min_slack_at: vr.min_slack_at,
            precision_bits: vr.precision_bits,
            checked: vr.checked,
            skipped: vr.skipped,
        }
    }
}

/// One convergent's result inside `verify mahler`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerCheckDto {
    pub p: i64,
    pub q: i64,
    /// Enclosure of |π − p/q|.
    pub gap: IntervalDto,
    /// Enclosure of 1/|q|^e.
    pub threshold: IntervalDto,
    pub passed: bool,
}

/// Report of `verify mahler`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerReport {
    pub command: String,
    pub check: String,
    pub exponent: f64,
    pub passed: bool,
    pub checks: Vec<MahlerCheckDto>,
    pub precision_bits: u32,
}

impl MahlerReport {
    pub fn new(outcomes: &[MahlerOutcome], fmt: &mut Fmt) -> Self {
        MahlerReport {
            command: "verify".into(),
            check: "pi-rational-gap".into(),
            exponent: outcomes.first().map_or(0.0, |o| o.exponent),
            passed: outcomes.iter().all(|o| o.passed),
            checks: outcomes
                .iter()
                .map(|o| MahlerCheckDto {
                    p: o.approx.p,
                    q: o.approx.q,
                    gap: IntervalDto::new(&o.gap, fmt),
                    threshold: IntervalDto::new(&o.threshold, fmt),
                    passed: o.passed,
                })
                .collect(),
            precision_bits: outcomes.first().map_or(0, |o| o.precision_bits),
        }
    }
}

/// Report of `tail --after N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub command: String,
    pub after: u64,
    pub precision_bits: u32,
    pub tame_tail: String,
    pub tame_tail_f64: f64,
    pub wild_tail: String,
    pub wild_tail_f64: f64,
    pub total_tail: String,
    pub total_tail_f64: f64,
}

impl TailReport {
    pub fn new(tb: &TailBound, precision_bits: u32, fmt: &mut Fmt) -> Self {
        TailReport {
            command: "tail".into(),
            after: tb.after_n,
            precision_bits,
            tame_tail: fmt.decimal(&tb.tame_tail, RoundingMode::Up),
            tame_tail_f64: f64_up(&tb.tame_tail),
            wild_tail: fmt.decimal(&tb.wild_tail, RoundingMode::Up),
            wild_tail_f64: f64_up(&tb.wild_tail),
            total_tail: fmt.decimal(&tb.total_tail, RoundingMode::Up),
            total_tail_f64: f64_up(&tb.total_tail),
        }
    }
}

/// Report of `certify --terms N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub command: String,
    pub terms: u64,
    pub precision_bits: u32,
    /// Certified enclosure of the partial sum over the prefix.
    pub partial: IntervalDto,
    /// Upper bound on everything beyond the prefix.
    pub tail_bound: f64,
    /// partial.hi + tail, the reproducible headline bound.
    pub total_upper_bound: f64,
    /// One interval certified to contain the exact value of the full
    /// infinite sum.
    pub enclosure: IntervalDto,
    /// Width of `enclosure` — dominated by the slow wild-tail decay.
    pub width: f64,
}

impl CertifyReport {
    pub fn new(
        ps: &PartialSum,
        tb: &TailBound,
        enclosure: &Interval,
        p: PrecisionBits,
        fmt: &mut Fmt,
    ) -> Self {
        CertifyReport {
            command: "certify".into(),
            terms: ps.upto_n,
            precision_bits: p.bits(),
            partial: IntervalDto::new(&ps.value, fmt),
            tail_bound: f64_up(&tb.total_tail),
            total_upper_bound: f64_up(enclosure.hi()),
            enclosure: IntervalDto::new(enclosure, fmt),
            width: f64_up(&enclosure.width_up(p)),
        }
    }
}

/// Reading aid for enclosures: the midpoint of the converted endpoints.
fn midpoint_f64(iv: &Interval) -> f64 {
    0.5 * (f64_down(iv.lo()) + f64_up(iv.hi()))
}

/// A report that can be written as JSON or as plain text.
pub trait Render: Serialize {
    fn human(&self, out: &mut dyn Write) -> io::Result<()>;
}

/// Writes one report in the requested format, newline-terminated.
pub fn emit<R: Render>(out: &mut dyn Write, format: OutputFormat, report: &R) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer(&mut *out, report)?;
            writeln!(out)
        }
        OutputFormat::Human => report.human(out),
    }
}

impl Render for SumReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "sum of the first {} terms ({} engine, {}-bit)",
            self.terms, self.engine, self.precision_bits
        )?;
        writeln!(out, "  value in [{}, {}]", self.value.lo_f64, self.value.hi_f64)?;
        writeln!(out, "  lo = {}", self.value.lo)?;
        writeln!(out, "  hi = {}", self.value.hi)?;
        if let Some(e) = self.error_estimate {
            writeln!(out, "  error estimate = {e:e}")?;
        }
        Ok(())
    }
}

impl Render for ClassifyReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "n = {} is {}", self.n, self.verdict)?;
        writeln!(
            out,
            "  distance to nearest peak center = {} (enclosure [{}, {}])",
            self.theta, self.theta_enclosure.lo_f64, self.theta_enclosure.hi_f64
        )?;
        writeln!(
            out,
            "  wildness threshold 4/n^(1/4)    = {} (enclosure [{}, {}])",
            self.threshold, self.threshold_enclosure.lo_f64, self.threshold_enclosure.hi_f64
        )?;
        writeln!(out, "  decided at {} bits", self.precision_bits)
    }
}

impl Render for WildReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "{} wild numbers up to {} ({}-bit{})",
            self.count,
            self.limit,
            self.precision_bits,
            if self.cache_used { ", cached" } else { "" }
        )?;
        for (i, w) in self.wilds.iter().enumerate() {
            writeln!(out, "  W_{} = {}", i + 1, w)?;
        }
        Ok(())
    }
}

impl Render for VerifyDto {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "check {} over [{}, {}]: {}",
            self.check,
            self.range.0,
            self.range.1,
            if self.passed { "passed" } else { "FAILED" }
        )?;
        writeln!(
            out,
            "  checked {} indices, skipped {}, at {} bits",
            self.checked, self.skipped, self.precision_bits
        )?;
        if let (Some(s), Some(at)) = (self.min_slack, self.min_slack_at) {
            writeln!(out, "  minimum slack {s:e} at {at}")?;
        }
        for f in &self.failures {
            writeln!(out, "  FAILURE at {}: lhs {:e} vs rhs {:e}", f.at, f.lhs, f.rhs)?;
        }
        Ok(())
    }
}

impl Render for MahlerReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "check {} with exponent {}: {}",
            self.check,
            self.exponent,
            if self.passed { "passed" } else { "FAILED" }
        )?;
        for c in &self.checks {
            writeln!(
                out,
                "  {}/{}: gap ≥ {:e}, threshold ≤ {:e} — {}",
                c.p,
                c.q,
                c.gap.lo_f64,
                c.threshold.hi_f64,
                if c.passed { "passed" } else { "FAILED" }
            )?;
        }
        writeln!(out, "  at {} bits", self.precision_bits)
    }
}

impl Render for TailReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "tail after {} ({}-bit)", self.after, self.precision_bits)?;
        writeln!(out, "  tame part  ≤ {:e}", self.tame_tail_f64)?;
        writeln!(out, "  wild part  ≤ {:e}", self.wild_tail_f64)?;
        writeln!(out, "  total      ≤ {:e}", self.total_tail_f64)
    }
}

impl Render for CertifyReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "certified enclosure from the first {} terms ({}-bit)",
            self.terms, self.precision_bits
        )?;
        writeln!(
            out,
            "  partial sum in [{}, {}]",
            self.partial.lo_f64, self.partial.hi_f64
        )?;
        writeln!(out, "  tail ≤ {:e}", self.tail_bound)?;
        writeln!(
            out,
            "  full sum in [{}, {}]",
            self.enclosure.lo_f64, self.enclosure.hi_f64
        )?;
        writeln!(out, "  upper bound {}", self.total_upper_bound)?;
        writeln!(out, "  enclosure width {:e}", self.width)
    }
}
