//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes to exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | no representation exists (or none was found) |
//! | 2 | usage error |
//! | 3 | internal search exhaustion or a failed self-check |
//!
//! Decomposition records are emitted as one JSON object per line with keys
//! `n, s, k, parts, trials, path`.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Nat;
use crate::audit::{self, AuditReport};
use crate::error::Error;
use crate::random::RandomSource;
use crate::thin_basis::{self, BasisParams, Scale, ThinBasis, DEFAULT_T_MAX};
use crate::{four_squares, prime_classify, three_squares, two_squares};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_REPRESENTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    JsonLines,
    Csv,
    Plain,
}

#[derive(Debug, Parser)]
#[command(name = "thinsq", version, about = "Sums of squares and thin bases of squares")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::JsonLines)]
    format: OutputFormat,
    /// Write output here instead of stdout (required by `basis build`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write N as a sum of 2, 3, 4 or 2s squares.
    Decompose {
        #[arg(long, value_parser = ["2", "3", "4", "2s"])]
        squares: String,
        /// s for `--squares 2s`.
        #[arg(long)]
        s: Option<u32>,
        #[arg(value_parser = parse_nat)]
        n: Nat,
    },
    /// Count signed ordered representations.
    Count {
        #[arg(value_enum)]
        function: CountFn,
        #[arg(value_parser = parse_nat)]
        n: Nat,
    },
    /// Minimal all-nonzero representation of a prime.
    ClassifyPrime {
        #[arg(value_parser = parse_nat)]
        p: Nat,
    },
    #[command(subcommand)]
    Basis(BasisCommand),
    /// Write N as seven cubes.
    Cubes7 {
        #[arg(value_parser = parse_nat)]
        n: Nat,
    },
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountFn {
    R2,
    R4,
}

#[derive(Debug, clap::Args)]
struct ScaleArgs {
    #[arg(long)]
    c0: Option<Scale>,
    #[arg(long)]
    c1: Option<Scale>,
    #[arg(long = "t-max")]
    t_max: Option<u32>,
}

impl ScaleArgs {
    fn params(&self, x: Nat) -> BasisParams {
        let mut p = BasisParams::with_t_max(x, self.t_max.unwrap_or(DEFAULT_T_MAX));
        if let Some(c0) = self.c0 {
            p.c0 = c0;
        }
        if let Some(c1) = self.c1 {
            p.c1 = c1;
        }
        p
    }
}

#[derive(Debug, Subcommand)]
enum BasisCommand {
    /// Build the basis for cutoff X and write it to --out.
    Build {
        #[arg(long, value_parser = parse_nat)]
        x: Nat,
        #[command(flatten)]
        scales: ScaleArgs,
    },
    /// Greedy decomposition of N over the basis for cutoff X.
    Decompose {
        #[arg(long, value_parser = parse_nat)]
        x: Nat,
        #[command(flatten)]
        scales: ScaleArgs,
        #[arg(value_parser = parse_nat)]
        n: Nat,
    },
    /// Cardinality exponents over a grid, optionally a coverage audit.
    Audit {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_nat)]
        grid: Vec<Nat>,
        /// Run the coverage audit on [0, X].
        #[arg(long = "coverage-max", value_parser = parse_nat)]
        coverage_max: Option<Nat>,
        /// Also write the full report as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        scales: ScaleArgs,
    },
}

#[derive(Debug, Subcommand)]
enum BenchCommand {
    /// Random-pair trial counts of the four-square search.
    Rs {
        #[arg(long, value_delimiter = ',', required = true)]
        bits: Vec<u32>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_nat(s: &str) -> Result<Nat, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => Nat::from_str_radix(hex, 16),
        None => s.parse::<Nat>(),
    };
    parsed.map_err(|e| format!("invalid integer '{s}': {e}"))
}

#[derive(Debug, Serialize)]
struct DecompositionRecord {
    n: Nat,
    s: usize,
    k: u32,
    parts: Vec<Nat>,
    trials: Option<u64>,
    path: String,
}

impl DecompositionRecord {
    fn new(n: Nat, k: u32, parts: Vec<Nat>, trials: Option<u64>, path: &str) -> Self {
        Self { n, s: parts.len(), k, parts, trials, path: path.to_string() }
    }

    fn verifies(&self) -> bool {
        self.parts
            .iter()
            .try_fold(0 as Nat, |acc, &p| p.checked_pow(self.k).and_then(|v| acc.checked_add(v)))
            == Some(self.n)
    }

    fn plain(&self) -> String {
        let terms: Vec<String> = self.parts.iter().map(|p| format!("{p}^{}", self.k)).collect();
        format!("{} = {}  [{}]", self.n, terms.join(" + "), self.path)
    }
}

#[derive(Debug, Serialize)]
struct CountRecord {
    n: Nat,
    function: &'static str,
    value: Nat,
}

#[derive(Debug, Serialize)]
struct BenchRecord {
    bits: u32,
    samples: usize,
    mean_trials: f64,
    max_trials: u64,
}

enum Failure {
    Usage(String),
    NoRepresentation(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::GirardViolation(_)
            | Error::NotRepresentable { .. }
            | Error::IneligibleForm(_)
            | Error::ShiftExhausted { .. }
            | Error::PartOutOfBasis { .. }
            | Error::NoDecompositionFound(_) => Failure::NoRepresentation(msg),
            Error::SearchExhausted(_) => Failure::Internal(msg),
            Error::Zero { .. } | Error::InvalidArgument(_) | Error::NotPrime(_) | Error::InputTooLarge { .. } => {
                Failure::Usage(msg)
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Internal(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(format!("json error: {e}"))
    }
}

/// Parses `argv` (including the program name) and runs the command with
/// the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (code, msg) = match execute(&cli, stdout) {
        Ok(()) => (EXIT_OK, None),
        Err(Failure::Usage(m)) => (EXIT_USAGE, Some(m)),
        Err(Failure::NoRepresentation(m)) => (EXIT_NO_REPRESENTATION, Some(m)),
        Err(Failure::Internal(m)) => (EXIT_INTERNAL, Some(m)),
    };
    if let Some(m) = msg {
        let _ = writeln!(stderr, "thinsq: {m}");
    }
    code
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut rng = RandomSource::new(cli.seed);
    let is_table = matches!(
        cli.command,
        Command::Basis(BasisCommand::Audit { .. }) | Command::Bench(_)
    );
    if cli.format == OutputFormat::Csv && !is_table {
        return Err(Failure::Usage("csv output is only available for `basis audit` and `bench rs`".into()));
    }
    let build_target = matches!(cli.command, Command::Basis(BasisCommand::Build { .. }));
    let mut file;
    let out: &mut dyn Write = match (&cli.out, build_target) {
        (Some(path), false) => {
            file = File::create(path)?;
            &mut file
        }
        _ => stdout,
    };
    let mut buf = Vec::new();
    match &cli.command {
        Command::Decompose { squares, s, n } => {
            let record = decompose(squares, *s, *n, &mut rng)?;
            emit_record(&record, cli.format, &mut buf)?;
        }
        Command::Count { function, n } => {
            let (name, value) = match function {
                CountFn::R2 => ("r2", two_squares::r2(*n)?),
                CountFn::R4 => ("r4", four_squares::r4(*n)?),
            };
            match cli.format {
                OutputFormat::Plain => writeln!(buf, "{value}")?,
                _ => json_line(&CountRecord { n: *n, function: name, value }, &mut buf)?,
            }
        }
        Command::ClassifyPrime { p } => {
            let c = prime_classify::classify(*p, &mut rng)?;
            let class = serde_json::to_value(c.residue_class)?;
            let record = DecompositionRecord::new(*p, 2, c.parts, None, class.as_str().unwrap_or("?"));
            emit_record(&record, cli.format, &mut buf)?;
        }
        Command::Basis(cmd) => basis_command(cmd, cli, &mut rng, &mut buf)?,
        Command::Cubes7 { n } => {
            let roots = thin_basis::cube_greedy7(*n)?;
            let record = DecompositionRecord::new(*n, 3, roots.to_vec(), None, "cube_greedy7");
            emit_record(&record, cli.format, &mut buf)?;
        }
        Command::Bench(BenchCommand::Rs { bits, samples }) => {
            let rows = audit::rs_trial_bench(bits, *samples, &mut rng)?;
            match cli.format {
                OutputFormat::Plain => {
                    writeln!(buf, "{:>5} {:>8} {:>12} {:>10} {:>12}", "bits", "samples", "mean_trials", "max_trials", "normalized")?;
                    for r in &rows {
                        writeln!(
                            buf,
                            "{:>5} {:>8} {:>12.3} {:>10} {:>12.5}",
                            r.bits, r.samples, r.mean_trials, r.max_trials, r.normalized
                        )?;
                    }
                }
                format => {
                    let records: Vec<BenchRecord> = rows
                        .iter()
                        .map(|r| BenchRecord {
                            bits: r.bits,
                            samples: r.samples,
                            mean_trials: r.mean_trials,
                            max_trials: r.max_trials,
                        })
                        .collect();
                    emit_table(&records, format, &mut buf)?;
                }
            }
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

fn decompose(squares: &str, s: Option<u32>, n: Nat, rng: &mut RandomSource) -> Result<DecompositionRecord, Failure> {
    if s.is_some() && squares != "2s" {
        return Err(Failure::Usage("--s only applies to --squares 2s".into()));
    }
    Ok(match squares {
        "2" => {
            let rep = two_squares::two_squares_any(n, rng)?;
            DecompositionRecord::new(n, 2, rep.roots().to_vec(), None, "two_squares")
        }
        "3" => {
            let rep = three_squares::three_squares(n, rng)?;
            DecompositionRecord::new(n, 2, rep.roots().to_vec(), None, "three_squares")
        }
        "4" => {
            let rep = four_squares::four_squares(n, rng)?;
            let path = if rep.trials > 0 { "randomized" } else { "direct_search" };
            DecompositionRecord::new(n, 2, rep.roots().to_vec(), Some(rep.trials), path)
        }
        _ => {
            let s = s.ok_or_else(|| Failure::Usage("--squares 2s requires --s".into()))?;
            let rep = four_squares::two_s_squares(n, s, rng)?;
            DecompositionRecord::new(n, 2, rep.parts, None, "two_s_squares")
        }
    })
}

fn basis_command(cmd: &BasisCommand, cli: &Cli, rng: &mut RandomSource, buf: &mut Vec<u8>) -> Result<(), Failure> {
    match cmd {
        BasisCommand::Build { x, scales } => {
            let path = cli.out.as_ref().ok_or_else(|| Failure::Usage("basis build requires --out FILE".into()))?;
            let basis = ThinBasis::build(scales.params(*x))?;
            let mut file = File::create(path)?;
            serde_json::to_writer_pretty(&mut file, &basis.to_document())?;
            writeln!(file)?;
            let card = basis.cardinality();
            match cli.format {
                OutputFormat::Plain => writeln!(buf, "x = {x}: #A1 = {}, #A2 = {}, #A = {}", card.n1, card.n2, card.total)?,
                _ => json_line(&audit::CardinalityRecord { x: *x, n1: card.n1, n2: card.n2, total: card.total }, buf)?,
            }
        }
        BasisCommand::Decompose { x, scales, n } => {
            let basis = ThinBasis::build(scales.params(*x))?;
            let trace = basis.greedy_decompose(*n, rng)?;
            if !basis.verify_trace(&trace) {
                return Err(Failure::Internal(format!("trace for {n} failed verification")));
            }
            let record = DecompositionRecord::new(*n, 2, trace.parts().to_vec(), None, trace.path.as_str());
            match cli.format {
                OutputFormat::Plain => {
                    check(&record)?;
                    writeln!(
                        buf,
                        "{}  t = {}, base = {}, m = {}",
                        record.plain(),
                        trace.t,
                        trace.base,
                        trace.m
                    )?;
                }
                format => emit_record(&record, format, buf)?,
            }
        }
        BasisCommand::Audit { grid, coverage_max, summary, scales } => {
            let template = scales.params(1);
            let mut report: AuditReport = audit::cardinality_audit(grid, &template)?;
            if let Some(cx) = coverage_max {
                report.coverage = Some(audit::coverage_audit(*cx, &template, rng)?);
            }
            if let Some(path) = summary {
                let mut file = File::create(path)?;
                serde_json::to_writer_pretty(&mut file, &report)?;
                writeln!(file)?;
            }
            match cli.format {
                OutputFormat::Plain => write_audit_plain(&report, buf)?,
                format => emit_table(&report.rows(), format, buf)?,
            }
        }
    }
    Ok(())
}

fn write_audit_plain(report: &AuditReport, buf: &mut Vec<u8>) -> io::Result<()> {
    writeln!(buf, "{:>12} {:>8} {:>10} {:>10}", "x", "#A1", "#A2", "#A")?;
    for r in &report.records {
        writeln!(buf, "{:>12} {:>8} {:>10} {:>10}", r.x, r.n1, r.n2, r.total)?;
    }
    writeln!(buf, "alpha1 = {:.4}", report.alpha1)?;
    writeln!(buf, "alpha2 = {:.4}", report.alpha2)?;
    writeln!(buf, "alpha_union = {:.4}", report.alpha_union)?;
    if let Some(c) = &report.coverage {
        let scope = if c.exhaustive { "exhaustive" } else { "stratified sample" };
        writeln!(buf, "coverage over [0, {}] ({scope}, {} values)", c.x, c.audited)?;
        writeln!(buf, "  greedy = {}, fallback = {}, failures = {}", c.greedy, c.fallback, c.failures.len())?;
        let hist: Vec<String> = c.t_histogram.iter().map(|(t, k)| format!("t={t}:{k}")).collect();
        writeln!(buf, "  shifts: {}", hist.join(" "))?;
        writeln!(buf, "  max_m_ratio = {:.4}", c.max_m_ratio)?;
        for f in c.failures.iter().take(20) {
            writeln!(buf, "  failure n = {} ({})", f.n, f.kind)?;
        }
        if c.failures.len() > 20 {
            writeln!(buf, "  ... {} more", c.failures.len() - 20)?;
        }
    }
    Ok(())
}

fn check(record: &DecompositionRecord) -> Result<(), Failure> {
    if record.verifies() {
        Ok(())
    } else {
        Err(Failure::Internal(format!("decomposition of {} failed verification", record.n)))
    }
}

fn json_line<T: Serialize>(value: &T, buf: &mut Vec<u8>) -> Result<(), Failure> {
    serde_json::to_writer(&mut *buf, value)?;
    buf.push(b'\n');
    Ok(())
}

fn emit_record(record: &DecompositionRecord, format: OutputFormat, buf: &mut Vec<u8>) -> Result<(), Failure> {
    check(record)?;
    match format {
        OutputFormat::Plain => writeln!(buf, "{}", record.plain())?,
        _ => json_line(record, buf)?,
    }
    Ok(())
}

fn emit_table<T: Serialize>(rows: &[T], format: OutputFormat, buf: &mut Vec<u8>) -> Result<(), Failure> {
    match format {
        OutputFormat::Csv => audit::write_csv(rows, &mut *buf)?,
        _ => {
            for row in rows {
                json_line(row, buf)?;
            }
        }
    }
    Ok(())
}
