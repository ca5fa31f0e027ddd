//! Brute-force ground truth for the decomposition and counting routines.
//!
//! Everything here is plain enumeration, kept independent of the number
//! theory used elsewhere in the crate.

use std::collections::HashMap;

use crate::arith::Nat;
use crate::error::{Error, Result};

pub const SQUARE_REPS_LIMIT: Nat = 1_000_000;
pub const CUBE_REPS_LIMIT: Nat = 100_000;
pub const SIGNED_PAIR_LIMIT: Nat = 10_000;
pub const SIGNED_WIDE_LIMIT: Nat = 5_000;
pub const MIN_SQUARES_LIMIT: Nat = 100_000;

/// All canonical (nondecreasing) `s`-tuples of roots whose `k`-th powers
/// sum to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSet {
    pub n: Nat,
    pub s: usize,
    pub k: u32,
    pub tuples: Vec<Vec<Nat>>,
}

impl RepSet {
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

fn check_guard(n: Nat, s: usize, k: u32) -> Result<()> {
    let (limit, max_s) = match k {
        2 => (SQUARE_REPS_LIMIT, 4),
        3 => (CUBE_REPS_LIMIT, 7),
        _ => return Err(Error::InvalidArgument(format!("power k = {k} not supported"))),
    };
    if s == 0 || s > max_s {
        return Err(Error::InvalidArgument(format!("arity {s} outside 1..={max_s} for k = {k}")));
    }
    if n > limit {
        return Err(Error::InputTooLarge { n, limit });
    }
    Ok(())
}

fn powers(n: Nat, k: u32) -> Vec<Nat> {
    (0..).map(|r: Nat| r.pow(k)).take_while(|&v| v <= n).collect()
}

/// Depth-first enumeration of nondecreasing root tuples. `stop_at_first`
/// short-circuits for existence checks.
fn enumerate(
    rest: Nat,
    slots: usize,
    min_root: usize,
    pows: &[Nat],
    prefix: &mut Vec<Nat>,
    out: &mut Vec<Vec<Nat>>,
    stop_at_first: bool,
) {
    if stop_at_first && !out.is_empty() {
        return;
    }
    if slots == 0 {
        if rest == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for root in min_root..pows.len() {
        let p = pows[root];
        // remaining slots all take at least p
        if p.saturating_mul(slots as Nat) > rest {
            break;
        }
        if slots == 1 {
            if p == rest {
                prefix.push(root as Nat);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            continue;
        }
        prefix.push(root as Nat);
        enumerate(rest - p, slots - 1, root, pows, prefix, out, stop_at_first);
        prefix.pop();
        if stop_at_first && !out.is_empty() {
            return;
        }
    }
}

/// Four squares by meeting in the middle over a table of two-square sums.
fn four_square_reps(n: Nat) -> Vec<Vec<Nat>> {
    let mut pairs: HashMap<Nat, Vec<(Nat, Nat)>> = HashMap::new();
    let mut a: Nat = 0;
    while a * a * 2 <= n {
        let mut b = a;
        while a * a + b * b <= n {
            pairs.entry(a * a + b * b).or_default().push((a, b));
            b += 1;
        }
        a += 1;
    }
    let mut out = Vec::new();
    for (&low, lows) in &pairs {
        if 2 * low > n {
            continue;
        }
        let Some(highs) = pairs.get(&(n - low)) else {
            continue;
        };
        for &(x, y) in lows {
            for &(z, w) in highs {
                if y <= z {
                    out.push(vec![x, y, z, w]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn brute_reps(n: Nat, s: usize, k: u32) -> Result<RepSet> {
    check_guard(n, s, k)?;
    let tuples = if k == 2 && s == 4 {
        four_square_reps(n)
    } else {
        let mut out = Vec::new();
        enumerate(n, s, 0, &powers(n, k), &mut Vec::new(), &mut out, false);
        out
    };
    Ok(RepSet { n, s, k, tuples })
}

/// First canonical tuple in lexicographic order, if any.
pub fn brute_first(n: Nat, s: usize, k: u32) -> Result<Option<Vec<Nat>>> {
    check_guard(n, s, k)?;
    let mut out = Vec::new();
    enumerate(n, s, 0, &powers(n, k), &mut Vec::new(), &mut out, true);
    Ok(out.pop())
}

fn signed_square_counts(limit: Nat) -> Vec<Nat> {
    // counts[v] = #{a in Z : a^2 = v}
    let mut counts = vec![0; limit as usize + 1];
    let mut a: usize = 0;
    while a * a <= limit as usize {
        counts[a * a] += if a == 0 { 1 } else { 2 };
        a += 1;
    }
    counts
}

/// Number of ordered `s`-tuples over the integers whose squares sum to `n`.
pub fn brute_signed_count(n: Nat, s: usize) -> Result<Nat> {
    if s == 0 {
        return Err(Error::InvalidArgument("arity must be positive".into()));
    }
    let limit = if s <= 2 { SIGNED_PAIR_LIMIT } else { SIGNED_WIDE_LIMIT };
    if n > limit {
        return Err(Error::InputTooLarge { n, limit });
    }
    let single = signed_square_counts(n);
    let mut acc = single.clone();
    for _ in 1..s {
        let mut next = vec![0; acc.len()];
        for (v, &c) in acc.iter().enumerate().filter(|(_, &c)| c > 0) {
            for (u, &d) in single.iter().enumerate().take(acc.len() - v) {
                next[v + u] += c * d;
            }
        }
        acc = next;
    }
    Ok(acc[n as usize])
}

/// Smallest number of strictly positive squares summing to `n`.
pub fn min_nonzero_squares(n: Nat) -> Result<u32> {
    if n == 0 {
        return Err(Error::Zero { what: "min_nonzero_squares argument" });
    }
    if n > MIN_SQUARES_LIMIT {
        return Err(Error::InputTooLarge { n, limit: MIN_SQUARES_LIMIT });
    }
    let pows: Vec<Nat> = powers(n, 2).into_iter().skip(1).collect();
    for s in 1..=4usize {
        let mut out = Vec::new();
        // shift roots by one so that 0 is excluded
        enumerate(n, s, 0, &pows, &mut Vec::new(), &mut out, true);
        if !out.is_empty() {
            return Ok(s as u32);
        }
    }
    // Every n >= 1 is a sum of at most four positive squares (drop the zero
    // parts of a four-square representation); reaching here is a bug.
    Err(Error::NoDecompositionFound(n))
}
