//! Acceptance suite. Runs each criterion in turn, prints one PASS/FAIL line
//! per criterion followed by a short report, and exits non-zero if any
//! criterion fails.
//!
//! Run with `cargo test -p thin-squares --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use thin_squares::audit::{self, CoverageReport};
use thin_squares::oracle;
use thin_squares::thin_basis::CubeTable;
use thin_squares::{
    classify, eligible, four_squares, is_prime, r2, r4, three_squares, BasisParams, Nat, RandomSource,
    ThinBasis,
};

const SEED: u64 = 20240607;
const CHUNK: Nat = 2048;

struct Outcome {
    passed: bool,
    report: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, report: Vec<String>) -> Self {
        Self { passed, report }
    }
}

/// Decompositions for every n ≤ 10^5, serialized as one line per n so the
/// determinism check can compare bytes.
fn decomposition_lines(seed: u64) -> (Vec<String>, Vec<String>) {
    let limit: Nat = 100_000;
    let starts: Vec<Nat> = (0..=limit).step_by(CHUNK as usize).collect();
    let parts: Vec<(Vec<String>, Vec<String>)> = starts
        .par_iter()
        .map(|&lo| {
            let mut rng = RandomSource::derive(seed, lo as u64);
            let mut lines = Vec::new();
            let mut errors = Vec::new();
            for n in lo..(lo + CHUNK).min(limit + 1) {
                let three = three_squares(n, &mut rng);
                let exists3 = oracle::brute_first(n, 3, 2).expect("oracle in range").is_some();
                match &three {
                    Ok(rep) if !(rep.verify() && rep.target == n) => errors.push(format!("three_squares({n}) does not verify")),
                    Ok(_) if !exists3 => errors.push(format!("three_squares({n}) succeeded but no representation exists")),
                    Err(e) if exists3 => errors.push(format!("three_squares({n}) failed: {e}")),
                    _ => {}
                }
                if three.is_ok() != eligible(n) {
                    errors.push(format!("three_squares({n}) disagrees with eligible"));
                }
                let four = four_squares(n, &mut rng);
                match &four {
                    Ok(rep) if !(rep.verify() && rep.target == n) => errors.push(format!("four_squares({n}) does not verify")),
                    Err(e) => errors.push(format!("four_squares({n}) failed: {e}")),
                    _ => {}
                }
                let t = three.map(|r| format!("{:?}", r.roots())).unwrap_or_else(|e| e.kind().to_string());
                let f = four.map(|r| format!("{:?}/{}", r.roots(), r.trials)).unwrap_or_else(|e| e.kind().to_string());
                lines.push(format!("{n} {t} {f}"));
            }
            (lines, errors)
        })
        .collect();
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    for (l, e) in parts {
        lines.extend(l);
        errors.extend(e);
    }
    (lines, errors)
}

fn criterion1(seed: u64) -> (Outcome, String) {
    let (lines, errors) = decomposition_lines(seed);
    let ineligible = lines.iter().filter(|l| l.contains("ineligible_form")).count();
    let mut report = vec![format!("{} inputs checked, {} ineligible for three squares", lines.len(), ineligible)];
    report.extend(errors.iter().take(10).cloned());
    (Outcome::new(errors.is_empty(), report), lines.join("\n"))
}

fn criterion2() -> Outcome {
    let bad2: Vec<Nat> = (1..=10_000)
        .into_par_iter()
        .filter(|&n| r2(n).unwrap() != oracle::brute_signed_count(n, 2).unwrap())
        .collect();
    let bad4: Vec<Nat> = (1..=5_000)
        .into_par_iter()
        .filter(|&n| r4(n).unwrap() != oracle::brute_signed_count(n, 4).unwrap())
        .collect();
    let report = vec![
        format!("r2 mismatches for n <= 10^4: {bad2:?}"),
        format!("r4 mismatches for n <= 5000: {bad4:?}"),
    ];
    Outcome::new(bad2.is_empty() && bad4.is_empty(), report)
}

fn criterion3(seed: u64) -> (Outcome, String) {
    let x: Nat = 1_000_000;
    let mut rng = RandomSource::new(seed);
    let cov: CoverageReport = audit::coverage_audit(x, &BasisParams::new(x), &mut rng).expect("coverage audit runs");
    let max_t = cov.max_t.unwrap_or(0);
    let ratio_bound = 2.0 * (max_t as f64 + 1.0) + 1.0;
    let verify_failures = cov.failures.iter().filter(|f| f.kind == "verify_failed").count();
    let passed = cov.failures.is_empty() && max_t <= 4 && cov.max_m_ratio <= ratio_bound;
    let mut report = vec![
        format!(
            "audited {} values: greedy {}, fallback {}, failures {} ({} failed verification)",
            cov.audited,
            cov.greedy,
            cov.fallback,
            cov.failures.len(),
            verify_failures
        ),
        format!("shift histogram {:?}, max t = {max_t}", cov.t_histogram),
        format!("max m/sqrt(n) = {:.4}, bound 2(max t + 1) + 1 = {ratio_bound}", cov.max_m_ratio),
    ];
    if !cov.failures.is_empty() {
        let kinds: BTreeSet<&str> = cov.failures.iter().map(|f| f.kind.as_str()).collect();
        let all_div64 = cov.failures.iter().all(|f| f.n % 64 == 0);
        let first: Vec<Nat> = cov.failures.iter().take(8).map(|f| f.n).collect();
        report.push(format!("failure kinds {kinds:?}; first failures {first:?}"));
        report.push(format!(
            "analysis: every failure is divisible by 64: {all_div64}. For 8 | n an odd base leaves a remainder \
             = 7 mod 8, so n = 4^r q needs shifts growing like 2^r, beyond t <= 4."
        ));
        let n = 786_432; // 4^9 * 3
        report.push(format!(
            "analysis: {n} = 4^9 * 3 has every four-square root divisible by 256, so no choice of parts \
             from A1 (roots <= {}) and A2 decomposes it; the failure is structural, not a search limit.",
            ThinBasis::build(BasisParams::new(x)).unwrap().a1_roots().end()
        ));
    }
    let serialized = serde_json::to_string(&cov).expect("report serializes");
    (Outcome::new(passed, report), serialized)
}

fn criterion4() -> Outcome {
    let grid: Vec<Nat> = vec![10_000, 100_000, 1_000_000, 10_000_000, 100_000_000];
    let r = audit::cardinality_audit(&grid, &BasisParams::new(1)).expect("cardinality audit runs");
    let passed = (0.23..=0.27).contains(&r.alpha1) && (0.45..=0.55).contains(&r.alpha2);
    let mut report: Vec<String> =
        r.records.iter().map(|c| format!("x = {:>9}: #A1 = {:>4}, #A2 = {:>5}, #A = {:>5}", c.x, c.n1, c.n2, c.total)).collect();
    report.push(format!(
        "alpha1 = {:.4} (want [0.23, 0.27]), alpha2 = {:.4} (want [0.45, 0.55]), alpha_union = {:.4} (reported only)",
        r.alpha1, r.alpha2, r.alpha_union
    ));
    Outcome::new(passed, report)
}

fn criterion5() -> Outcome {
    let mut passed = true;
    let mut report = Vec::new();
    for x in [10_000 as Nat, 1_000_000] {
        let basis = ThinBasis::build(BasisParams::new(x)).unwrap();
        let full = audit::size_bounds_check(&basis, 4);
        let sub: Vec<Nat> = basis.union_squares().into_iter().take(100).collect();
        let (count, bound, ok) = audit::sumset_check(&sub, 4);
        let sub_ok = ok == Some(true);
        passed &= full.lower_ok && full.upper_ok && full.multiset_ok != Some(false) && sub_ok;
        report.push(format!(
            "x = {x}: #A = {}, range ok = {}, full-basis 4-fold sums {:?} <= {:?}; 100-element sub-basis {:?} <= {:?}",
            full.size,
            full.lower_ok && full.upper_ok,
            full.distinct_sums,
            full.multiset_bound,
            count,
            bound
        ));
    }
    Outcome::new(passed, report)
}

fn criterion6() -> Outcome {
    let mut rng = RandomSource::new(SEED);
    let mut errors = Vec::new();
    let mut checked = 0;
    for p in (2..=10_000).filter(|&p| is_prime(p)) {
        checked += 1;
        let c = classify(p, &mut rng).expect("classify prime");
        let want = oracle::min_nonzero_squares(p).unwrap() as usize;
        let sum: Nat = c.parts.iter().map(|v| v * v).sum();
        if c.parts.len() != want || c.parts.contains(&0) || sum != p {
            errors.push(format!("p = {p}: parts {:?}, oracle count {want}", c.parts));
        }
    }
    let mut report = vec![format!("{checked} primes checked")];
    report.extend(errors.iter().take(10).cloned());
    Outcome::new(errors.is_empty(), report)
}

fn criterion7(seed: u64) -> (Outcome, String) {
    let mut rng = RandomSource::new(seed);
    match audit::rs_trial_bench(&[16, 24, 32, 40, 48], 200, &mut rng) {
        Ok(rows) => {
            let finite = rows.iter().all(|r| r.mean_trials.is_finite());
            let report = rows
                .iter()
                .map(|r| {
                    format!(
                        "bits {:>2}: mean trials {:>7.3}, max {:>4}, mean / (ln N ln ln N) = {:.4}",
                        r.bits, r.mean_trials, r.max_trials, r.normalized
                    )
                })
                .collect();
            (Outcome::new(finite, report), serde_json::to_string(&rows).unwrap())
        }
        Err(e) => (Outcome::new(false, vec![format!("bench failed: {e}")]), String::new()),
    }
}

fn criterion8() -> Outcome {
    let limit: Nat = 100_000;
    let table = CubeTable::new(limit).expect("cube table");
    let failures: Vec<Nat> = (1..=limit).into_par_iter().filter(|&n| table.greedy7(n).is_err()).collect();
    let n0 = failures.last().map_or(1, |&f| f + 1);
    let passed = n0 <= 10_000 && failures.contains(&23);
    let report = vec![format!("n_0 = {n0}; failures below n_0 ({}): {failures:?}", failures.len())];
    Outcome::new(passed, report)
}

fn criterion9(first: &[String; 3]) -> Outcome {
    let (_, d1) = criterion1(SEED);
    let (_, d3) = criterion3(SEED);
    let (_, d7) = criterion7(SEED);
    let same = [d1 == first[0], d3 == first[1], d7 == first[2]];
    let report = vec![format!(
        "identical reruns: criterion 1 = {}, criterion 3 = {}, criterion 7 = {} ({} + {} + {} bytes)",
        same[0],
        same[1],
        same[2],
        d1.len(),
        d3.len(),
        d7.len()
    )];
    Outcome::new(same.iter().all(|&b| b), report)
}

fn print(id: u32, title: &str, outcome: &Outcome, started: Instant) {
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {id}: {title} [{:.1}s]", started.elapsed().as_secs_f64());
    for line in &outcome.report {
        println!("    {line}");
    }
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    let mut record = |id: u32, title: &str, outcome: Outcome, started: Instant| {
        print(id, title, &outcome, started);
        if !outcome.passed {
            failed.push(id);
        }
    };

    let t = Instant::now();
    let (o1, d1) = criterion1(SEED);
    record(1, "three/four-square decompositions for n <= 10^5", o1, t);
    let t = Instant::now();
    record(2, "r2 and r4 against brute-force counts", criterion2(), t);
    let t = Instant::now();
    let (o3, d3) = criterion3(SEED);
    record(3, "thin-basis coverage at x = 10^6 with t <= 4", o3, t);
    let t = Instant::now();
    record(4, "cardinality exponents over 10^4 .. 10^8", criterion4(), t);
    let t = Instant::now();
    record(5, "cardinality range and multiset sum bound", criterion5(), t);
    let t = Instant::now();
    record(6, "prime classification matches minimal square counts", criterion6(), t);
    let t = Instant::now();
    let (o7, d7) = criterion7(SEED);
    record(7, "randomized four-square trial counts", o7, t);
    let t = Instant::now();
    record(8, "seven cubes above an empirical threshold", criterion8(), t);
    let t = Instant::now();
    record(9, "same seed gives byte-identical output", criterion9(&[d1, d3, d7]), t);

    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
