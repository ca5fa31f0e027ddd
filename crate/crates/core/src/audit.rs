//! Measurements of the thin basis: fitted cardinality exponents, coverage of
//! the greedy decomposition, sum-set bounds, and trial counts of the
//! randomized four-square search.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Nat;
use crate::error::{Error, Result};
use crate::four_squares::four_squares;
use crate::random::RandomSource;
use crate::thin_basis::{BasisParams, ThinBasis, TracePath};

pub const COVERAGE_LIMIT: Nat = 10_000_000;
pub const EXHAUSTIVE_LIMIT: Nat = 1_000_000;
pub const STRATIFIED_SAMPLES: u64 = 100_000;
pub const MAX_BENCH_BITS: u32 = 48;
const CHUNK: Nat = 4096;
const SUMSET_MAX_ELEMENTS: usize = 10_000;
const SUMSET_MAX_BITS: Nat = 1 << 30;

/// Least-squares slope of `ln(count)` against `ln(x)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument("exponent fit needs at least 3 points".into()));
    }
    if points.iter().any(|&(x, c)| x <= 0.0 || c <= 0.0) {
        return Err(Error::InvalidArgument("exponent fit needs positive coordinates".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, c)| (x.ln(), c.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(u, v)| (u - mx) * (v - my)).sum();
    let sxx: f64 = logs.iter().map(|&(u, _)| (u - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("exponent fit needs distinct x values".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CardinalityRecord {
    pub x: Nat,
    pub n1: Nat,
    pub n2: Nat,
    pub total: Nat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageFailure {
    pub n: Nat,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub x: Nat,
    /// True when every `n` in `[0, x]` was decomposed.
    pub exhaustive: bool,
    pub audited: u64,
    pub greedy: u64,
    pub fallback: u64,
    pub failures: Vec<CoverageFailure>,
    pub t_histogram: BTreeMap<u32, u64>,
    pub max_t: Option<u32>,
    /// Largest `m / sqrt(n)` over greedy-path traces.
    pub max_m_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub x_grid: Vec<Nat>,
    pub records: Vec<CardinalityRecord>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha_union: f64,
    pub coverage: Option<CoverageReport>,
}

/// One row of the audit table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub x: Nat,
    pub n1: Nat,
    pub n2: Nat,
    pub total: Nat,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha_union: f64,
    pub max_t: Option<u32>,
    pub failures: Option<usize>,
}

impl AuditReport {
    /// One row per grid point; coverage columns are filled when a coverage
    /// audit was run at that cutoff.
    pub fn rows(&self) -> Vec<AuditRow> {
        self.records
            .iter()
            .map(|r| {
                let cov = self.coverage.as_ref().filter(|c| c.x == r.x);
                AuditRow {
                    x: r.x,
                    n1: r.n1,
                    n2: r.n2,
                    total: r.total,
                    alpha1: self.alpha1,
                    alpha2: self.alpha2,
                    alpha_union: self.alpha_union,
                    max_t: cov.and_then(|c| c.max_t),
                    failures: cov.map(|c| c.failures.len()),
                }
            })
            .collect()
    }
}

/// Builds a basis at every grid point and fits cardinality exponents.
///
/// `template` supplies `c0`, `c1` and `t_max`; its `x` is replaced.
pub fn cardinality_audit(grid: &[Nat], template: &BasisParams) -> Result<AuditReport> {
    if grid.len() < 3 {
        return Err(Error::InvalidArgument("grid needs at least 3 points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(Error::InvalidArgument("grid must be positive and strictly increasing".into()));
    }
    let records = grid
        .iter()
        .map(|&x| {
            let card = ThinBasis::build(BasisParams { x, ..*template })?.cardinality();
            Ok(CardinalityRecord { x, n1: card.n1, n2: card.n2, total: card.total })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = |f: fn(&CardinalityRecord) -> Nat| {
        fit_exponent(&records.iter().map(|r| (r.x as f64, f(r) as f64)).collect::<Vec<_>>())
    };
    Ok(AuditReport {
        x_grid: grid.to_vec(),
        alpha1: fit(|r| r.n1)?,
        alpha2: fit(|r| r.n2)?,
        alpha_union: fit(|r| r.total)?,
        records,
        coverage: None,
    })
}

#[derive(Default)]
struct ChunkStats {
    audited: u64,
    greedy: u64,
    fallback: u64,
    failures: Vec<CoverageFailure>,
    t_histogram: BTreeMap<u32, u64>,
    max_m_ratio: f64,
}

impl ChunkStats {
    fn merge(mut self, other: ChunkStats) -> ChunkStats {
        self.audited += other.audited;
        self.greedy += other.greedy;
        self.fallback += other.fallback;
        self.failures.extend(other.failures);
        for (t, c) in other.t_histogram {
            *self.t_histogram.entry(t).or_default() += c;
        }
        self.max_m_ratio = self.max_m_ratio.max(other.max_m_ratio);
        self
    }
}

fn audit_values(basis: &ThinBasis, values: &[Nat], rng: &mut RandomSource) -> ChunkStats {
    let mut stats = ChunkStats::default();
    for &n in values {
        stats.audited += 1;
        match basis.greedy_decompose(n, rng) {
            Ok(trace) if basis.verify_trace(&trace) => match trace.path {
                TracePath::Greedy => {
                    stats.greedy += 1;
                    *stats.t_histogram.entry(trace.t).or_default() += 1;
                    if n > 0 {
                        stats.max_m_ratio = stats.max_m_ratio.max(trace.m as f64 / (n as f64).sqrt());
                    }
                }
                TracePath::SmallNFallback => stats.fallback += 1,
            },
            Ok(_) => stats.failures.push(CoverageFailure { n, kind: "verify_failed".into() }),
            Err(e) => stats.failures.push(CoverageFailure { n, kind: e.kind().into() }),
        }
    }
    stats
}

/// Values audited above the exhaustive limit: a fixed number per decade.
fn stratified_sample(x: Nat, rng: &mut RandomSource) -> Vec<Nat> {
    let mut decades = vec![(0, 9.min(x))];
    let mut lo: Nat = 10;
    while lo <= x {
        decades.push((lo, (lo * 10 - 1).min(x)));
        lo *= 10;
    }
    let quota = STRATIFIED_SAMPLES as Nat / decades.len() as Nat;
    let mut values = Vec::new();
    for (lo, hi) in decades {
        if hi - lo < quota {
            values.extend(lo..=hi);
        } else {
            let mut part: Vec<Nat> = (0..quota).map(|_| rng.uniform_inclusive(lo, hi)).collect();
            part.sort_unstable();
            values.extend(part);
        }
    }
    values
}

/// Runs the greedy decomposition over `[0, x]` (or a stratified sample
/// when `x` exceeds 10^6) and collects failures and shift statistics.
///
/// Work is split into fixed chunks, each with a seed derived from one draw
/// of `rng` and the chunk index, so the report does not depend on the
/// thread count.
pub fn coverage_audit(x: Nat, params: &BasisParams, rng: &mut RandomSource) -> Result<CoverageReport> {
    if x > COVERAGE_LIMIT {
        return Err(Error::InputTooLarge { n: x, limit: COVERAGE_LIMIT });
    }
    let basis = ThinBasis::build(BasisParams { x, ..*params })?;
    let master = rng.next_u64();
    let exhaustive = x <= EXHAUSTIVE_LIMIT;
    let values: Vec<Nat> = if exhaustive { (0..=x).collect() } else { stratified_sample(x, rng) };
    let chunks: Vec<ChunkStats> = values
        .par_chunks(CHUNK as usize)
        .enumerate()
        .map(|(i, chunk)| audit_values(&basis, chunk, &mut RandomSource::derive(master, i as u64)))
        .collect();
    let stats = chunks.into_iter().fold(ChunkStats::default(), ChunkStats::merge);
    let max_t = stats.t_histogram.keys().next_back().copied();
    Ok(CoverageReport {
        x,
        exhaustive,
        audited: stats.audited,
        greedy: stats.greedy,
        fallback: stats.fallback,
        failures: stats.failures,
        t_histogram: stats.t_histogram,
        max_t,
        max_m_ratio: stats.max_m_ratio,
    })
}

fn binomial(n: Nat, k: Nat) -> Option<Nat> {
    let mut acc: Nat = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of distinct `s`-fold sums `a_1 + ... + a_s` with repetition.
///
/// Bitset shift-or over the sum range; `None` when the range exceeds the
/// memory cap.
pub fn distinct_sums(elements: &[Nat], s: usize) -> Option<u64> {
    let max = *elements.iter().max()?;
    let span = max.checked_mul(s as Nat)? + 1;
    if span > SUMSET_MAX_BITS || elements.len() > SUMSET_MAX_ELEMENTS {
        return None;
    }
    let words = (span as usize).div_ceil(64);
    let mut current = vec![0u64; words];
    current[0] = 1;
    for _ in 0..s {
        let mut next = vec![0u64; words];
        for &a in elements {
            let (ws, bs) = ((a / 64) as usize, (a % 64) as u32);
            for i in ws..words {
                let lo = current[i - ws] << bs;
                let carry = if bs > 0 && i > ws { current[i - ws - 1] >> (64 - bs) } else { 0 };
                next[i] |= lo | carry;
            }
        }
        current = next;
    }
    Some(current.iter().map(|w| w.count_ones() as u64).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeBoundsReport {
    pub x: Nat,
    pub size: Nat,
    pub s: usize,
    /// `#A >= x^(1/4) / 2`
    pub lower_ok: bool,
    /// `#A <= 2 x^(1/2)`
    pub upper_ok: bool,
    pub distinct_sums: Option<u64>,
    /// `C(#A + s - 1, s)`, the number of multisets of size `s`.
    pub multiset_bound: Option<Nat>,
    pub multiset_ok: Option<bool>,
    /// `#A^s / s!`, reported only.
    pub power_bound: f64,
}

impl SizeBoundsReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.multiset_ok != Some(false)
    }
}

/// Sum-set bound for an explicit set of elements.
pub fn sumset_check(elements: &[Nat], s: usize) -> (Option<u64>, Option<Nat>, Option<bool>) {
    let count = distinct_sums(elements, s);
    let bound = binomial(elements.len() as Nat + s as Nat - 1, s as Nat);
    let ok = count.zip(bound).map(|(c, b)| c as Nat <= b);
    (count, bound, ok)
}

/// Cardinality range `x^(1/4)/2 <= #A <= 2 x^(1/2)` and the multiset bound
/// on distinct `s`-fold sums of `A1 ∪ A2`.
pub fn size_bounds_check(basis: &ThinBasis, s: usize) -> SizeBoundsReport {
    let x = basis.params().x;
    let size = basis.cardinality().total;
    let lower_ok = (2 * size).checked_pow(4).is_none_or(|v| v >= x);
    let upper_ok = size.checked_mul(size).is_some_and(|v| v <= 4 * x);
    let (distinct_sums, multiset_bound, multiset_ok) = if size as usize <= SUMSET_MAX_ELEMENTS {
        sumset_check(&basis.union_squares(), s)
    } else {
        (None, None, None)
    };
    let power_bound = (size as f64).powi(s as i32) / (1..=s).map(|i| i as f64).product::<f64>();
    SizeBoundsReport { x, size, s, lower_ok, upper_ok, distinct_sums, multiset_bound, multiset_ok, power_bound }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub bits: u32,
    pub samples: usize,
    pub mean_trials: f64,
    pub max_trials: u64,
    /// `mean_trials / (ln N * ln ln N)` at `N = 2^bits`.
    pub normalized: f64,
}

/// Trial counts of [`four_squares`] on uniform `bits`-bit inputs.
pub fn rs_trial_bench(bit_sizes: &[u32], samples: usize, rng: &mut RandomSource) -> Result<Vec<BenchRow>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    bit_sizes
        .iter()
        .map(|&bits| {
            if !(2..=MAX_BENCH_BITS).contains(&bits) {
                return Err(Error::InvalidArgument(format!("bit size {bits} outside 2..={MAX_BENCH_BITS}")));
            }
            let lo: Nat = 1 << (bits - 1);
            let (mut total, mut max) = (0u64, 0u64);
            for _ in 0..samples {
                let n = lo + rng.uniform_below(lo);
                let rep = four_squares(n, rng)?;
                if !rep.verify() || rep.target != n {
                    return Err(Error::SearchExhausted(n));
                }
                total += rep.trials;
                max = max.max(rep.trials);
            }
            let mean = total as f64 / samples as f64;
            let ln_n = bits as f64 * std::f64::consts::LN_2;
            Ok(BenchRow { bits, samples, mean_trials: mean, max_trials: max, normalized: mean / (ln_n * ln_n.ln()) })
        })
        .collect()
}

/// Writes serializable rows as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
