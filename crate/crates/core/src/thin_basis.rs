//! Thin basis of squares and the greedy shift decomposition over it.
//!
//! The basis is the union of two square sets for a cutoff `x`:
//!
//! * `A1` holds every square `q^2 <= c0 * sqrt(x)`;
//! * `A2` holds every square `q^2 <= x` with `q >= sqrt(c0) * x^(1/4)`.
//!
//! An integer `n <= x` is written as `(isqrt(n) - t)^2 + m` for the smallest
//! shift `t` leaving a three-square remainder `m`; the remainder's squares
//! land in `A1` and the leading square in `A2`. Values at or below the
//! crossover are decomposed with all four squares in `A1`.
//!
//! Every boundary test is an exact integer comparison: `q^2 <= c0 * sqrt(x)`
//! is evaluated as `q^4 * den^2 <= num^2 * x`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{icbrt, isqrt, Nat};
use crate::error::{Error, Result};
use crate::four_squares::four_squares;
use crate::random::RandomSource;
use crate::three_squares::{eligible, three_squares, ThreeSquareRep};

pub const DEFAULT_T_MAX: u32 = 4;

/// Positive rational scale factor `num / den`, at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    pub num: u64,
    pub den: u64,
}

impl Scale {
    pub const ONE: Scale = Scale { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::InvalidArgument(format!("scale {num}/{den} must be a rational >= 1")));
        }
        Ok(Self { num, den })
    }

    pub fn integer(v: u64) -> Result<Self> {
        Self::new(v, 1)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse scale '{s}', expected A or A/B"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Scale::new(num, den)
    }
}

/// Construction parameters of a [`ThinBasis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisParams {
    pub x: Nat,
    pub c0: Scale,
    pub c1: Scale,
    pub t_max: u32,
}

impl BasisParams {
    /// Defaults for cutoff `x`: `t_max = 4`, `c0 = 2(t_max + 1) + 1`, `c1 = 1`.
    pub fn new(x: Nat) -> Self {
        Self::with_t_max(x, DEFAULT_T_MAX)
    }

    /// `c0` sized so remainders `m <= 2(t+1)sqrt(n) + (t+1)^2` stay inside `A1`.
    pub fn with_t_max(x: Nat, t_max: u32) -> Self {
        Self {
            x,
            c0: Scale { num: 2 * (t_max as u64 + 1) + 1, den: 1 },
            c1: Scale::ONE,
            t_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x == 0 {
            return Err(Error::Zero { what: "basis cutoff x" });
        }
        if self.t_max == 0 {
            return Err(Error::InvalidArgument("t_max must be at least 1".into()));
        }
        Scale::new(self.c0.num, self.c0.den)?;
        Scale::new(self.c1.num, self.c1.den)?;
        let fits = (self.c0.num as Nat)
            .checked_mul(self.c0.num as Nat)
            .and_then(|s| s.checked_mul(self.x))
            .is_some()
            && (self.c1.num as Nat).checked_mul(self.x).is_some();
        if !fits {
            return Err(Error::InputTooLarge { n: self.x, limit: Nat::MAX / (self.c0.num as Nat).pow(2) });
        }
        Ok(())
    }

    /// `q^4 * den^2` compared against `num^2 * x`.
    fn fourth_power_cmp(&self, q: Nat) -> std::cmp::Ordering {
        let rhs = (self.c0.num as Nat).pow(2) * self.x;
        let lhs = q
            .checked_mul(q)
            .and_then(|s| s.checked_mul(s))
            .and_then(|s| s.checked_mul((self.c0.den as Nat).pow(2)));
        match lhs {
            Some(lhs) => lhs.cmp(&rhs),
            None => std::cmp::Ordering::Greater,
        }
    }
}

/// `#A1`, `#A2` and `#(A1 ∪ A2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cardinality {
    pub n1: Nat,
    pub n2: Nat,
    pub total: Nat,
}

/// The two square sets `A1` and `A2`, stored as ranges of roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinBasis {
    params: BasisParams,
    a1_hi: Nat,
    a2_lo: Nat,
    a2_hi: Nat,
}

/// On-disk form of a basis: the parameters plus the roots of both sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub x: Nat,
    pub c0_num: u64,
    pub c0_den: u64,
    pub c1_num: u64,
    pub c1_den: u64,
    pub t_max: u32,
    pub a1_bases: Vec<Nat>,
    pub a2_base_lo: Nat,
    pub a2_base_hi: Nat,
}

impl ThinBasis {
    pub fn build(params: BasisParams) -> Result<Self> {
        params.validate()?;
        use std::cmp::Ordering::*;

        let estimate = isqrt(isqrt(
            (params.c0.num as Nat).pow(2) * params.x / (params.c0.den as Nat).pow(2),
        ));
        let mut a1_hi = estimate;
        while params.fourth_power_cmp(a1_hi) == Greater {
            a1_hi -= 1;
        }
        while params.fourth_power_cmp(a1_hi + 1) != Greater {
            a1_hi += 1;
        }
        let a2_lo = if params.fourth_power_cmp(a1_hi) == Equal { a1_hi } else { a1_hi + 1 };
        let a2_hi = isqrt(params.x)
            .min(isqrt(params.c1.num as Nat * params.x / params.c1.den as Nat));
        Ok(Self { params, a1_hi, a2_lo, a2_hi })
    }

    pub fn params(&self) -> &BasisParams {
        &self.params
    }

    pub fn a1_roots(&self) -> RangeInclusive<Nat> {
        0..=self.a1_hi
    }

    /// Roots of `A2`; empty when the lower cutoff exceeds `sqrt(x)`.
    pub fn a2_roots(&self) -> RangeInclusive<Nat> {
        self.a2_lo..=self.a2_hi
    }

    pub fn a1_squares(&self) -> Vec<Nat> {
        self.a1_roots().map(|q| q * q).collect()
    }

    pub fn a2_squares(&self) -> Vec<Nat> {
        self.a2_roots().map(|q| q * q).collect()
    }

    pub fn in_a1(&self, root: Nat) -> bool {
        root <= self.a1_hi
    }

    pub fn in_a2(&self, root: Nat) -> bool {
        self.a2_roots().contains(&root)
    }

    /// Sorted elements of `A1 ∪ A2`.
    pub fn union_squares(&self) -> Vec<Nat> {
        let mut v = self.a1_squares();
        v.extend(self.a2_roots().filter(|&q| q > self.a1_hi).map(|q| q * q));
        v
    }

    pub fn cardinality(&self) -> Cardinality {
        let n1 = self.a1_hi + 1;
        let n2 = (self.a2_hi + 1).saturating_sub(self.a2_lo);
        let overlap = if self.a2_lo <= self.a2_hi.min(self.a1_hi) {
            self.a2_hi.min(self.a1_hi) - self.a2_lo + 1
        } else {
            0
        };
        Cardinality { n1, n2, total: n1 + n2 - overlap }
    }

    pub fn to_document(&self) -> BasisDocument {
        let p = &self.params;
        BasisDocument {
            x: p.x,
            c0_num: p.c0.num,
            c0_den: p.c0.den,
            c1_num: p.c1.num,
            c1_den: p.c1.den,
            t_max: p.t_max,
            a1_bases: self.a1_roots().collect(),
            a2_base_lo: self.a2_lo,
            a2_base_hi: self.a2_hi,
        }
    }

    /// Rebuilds a basis from its document, rejecting documents whose stored
    /// roots disagree with their parameters.
    pub fn from_document(doc: &BasisDocument) -> Result<Self> {
        let params = BasisParams {
            x: doc.x,
            c0: Scale::new(doc.c0_num, doc.c0_den)?,
            c1: Scale::new(doc.c1_num, doc.c1_den)?,
            t_max: doc.t_max,
        };
        let basis = Self::build(params)?;
        if basis.to_document() != *doc {
            return Err(Error::InvalidArgument("basis document is inconsistent with its parameters".into()));
        }
        Ok(basis)
    }

    /// Decomposes `n <= x` as `a1 + a2 + a3 + a4` over this basis.
    pub fn greedy_decompose(&self, n: Nat, rng: &mut RandomSource) -> Result<GreedyTrace> {
        if n > self.params.x {
            return Err(Error::InputTooLarge { n, limit: self.params.x });
        }
        let root = isqrt(n);
        if root <= self.a1_hi {
            let rep = four_squares(n, rng)?;
            let [a, b, c, w] = rep.roots();
            let m = n - w * w;
            return Ok(GreedyTrace {
                n,
                t: 0,
                base: w,
                a4: w * w,
                m,
                three_rep: ThreeSquareRep { x: a, y: b, z: c, target: m },
                path: TracePath::SmallNFallback,
            });
        }
        let mut trace = greedy_shift(n, self.params.t_max, rng)?;
        if trace.base < self.a2_lo {
            // Just above the crossover a shifted base can drop below A2;
            // it is then an A1 root and the whole decomposition sits in A1.
            trace.path = TracePath::SmallNFallback;
        }
        if let Some(&root) = trace.three_rep.roots().iter().find(|&&r| !self.in_a1(r)) {
            return Err(Error::PartOutOfBasis { n, root });
        }
        Ok(trace)
    }

    /// True iff the trace sums to `n` and every part lies in its set.
    pub fn verify_trace(&self, trace: &GreedyTrace) -> bool {
        let rep = &trace.three_rep;
        let sums = trace.base.checked_mul(trace.base) == Some(trace.a4)
            && trace.a4.checked_add(trace.m) == Some(trace.n)
            && rep.target == trace.m
            && rep.verify()
            && trace.n <= self.params.x;
        if !sums || !rep.roots().iter().all(|&r| self.in_a1(r)) {
            return false;
        }
        match trace.path {
            TracePath::Greedy => {
                trace.t <= self.params.t_max
                    && isqrt(trace.n).checked_sub(trace.t as Nat) == Some(trace.base)
                    && self.in_a2(trace.base)
            }
            TracePath::SmallNFallback => self.in_a1(trace.base),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TracePath {
    Greedy,
    SmallNFallback,
}

impl TracePath {
    pub fn as_str(&self) -> &'static str {
        match self {
            TracePath::Greedy => "greedy",
            TracePath::SmallNFallback => "small_n_fallback",
        }
    }
}

/// Record of one decomposition `n = base^2 + m` with `m` written as three
/// squares.
///
/// On the greedy path `base = isqrt(n) - t`. On the fallback path `base` is
/// the largest root of a direct four-square decomposition and `t` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GreedyTrace {
    pub n: Nat,
    pub t: u32,
    pub base: Nat,
    pub a4: Nat,
    pub m: Nat,
    pub three_rep: ThreeSquareRep,
    pub path: TracePath,
}

impl GreedyTrace {
    /// The four roots, nondecreasing.
    pub fn parts(&self) -> [Nat; 4] {
        let mut p = [self.three_rep.x, self.three_rep.y, self.three_rep.z, self.base];
        p.sort_unstable();
        p
    }
}

/// The bare shift step: smallest `t <= t_max` such that
/// `n - (isqrt(n) - t)^2` is a sum of three squares.
pub fn greedy_shift(n: Nat, t_max: u32, rng: &mut RandomSource) -> Result<GreedyTrace> {
    let root = isqrt(n);
    for t in 0..=t_max.min(root.min(u32::MAX as Nat) as u32) {
        let base = root - t as Nat;
        let m = n - base * base;
        if eligible(m) {
            return Ok(GreedyTrace {
                n,
                t,
                base,
                a4: base * base,
                m,
                three_rep: three_squares(m, rng)?,
                path: TracePath::Greedy,
            });
        }
    }
    Err(Error::ShiftExhausted { n, t_max })
}

/// Builds the basis for `params` and decomposes `n` over it.
pub fn greedy_decompose(n: Nat, params: &BasisParams, rng: &mut RandomSource) -> Result<GreedyTrace> {
    ThinBasis::build(*params)?.greedy_decompose(n, rng)
}

/// Largest table the cube search will allocate.
pub const CUBE_TABLE_CAP: Nat = 10_000_000;

/// Lookup table for sums of three cubes, used to split a remainder into six
/// cubes by meeting in the middle.
#[derive(Debug, Clone)]
pub struct CubeTable {
    limit: Nat,
    is_sum3: Vec<bool>,
    sums3: Vec<u32>,
}

impl CubeTable {
    pub fn new(limit: Nat) -> Result<Self> {
        if limit > CUBE_TABLE_CAP {
            return Err(Error::InputTooLarge { n: limit, limit: CUBE_TABLE_CAP });
        }
        let lim = limit as usize;
        let cubes: Vec<usize> = (0..).map(|c: usize| c * c * c).take_while(|&c| c <= lim).collect();
        let mut is_sum3 = vec![false; lim + 1];
        for (i, &a) in cubes.iter().enumerate() {
            for (j, &b) in cubes.iter().enumerate().skip(i) {
                if a + b > lim {
                    break;
                }
                for &c in &cubes[j..] {
                    if a + b + c > lim {
                        break;
                    }
                    is_sum3[a + b + c] = true;
                }
            }
        }
        let sums3 = (0..=lim).filter(|&v| is_sum3[v]).map(|v| v as u32).collect();
        Ok(Self { limit, is_sum3, sums3 })
    }

    pub fn limit(&self) -> Nat {
        self.limit
    }

    fn three_cubes(v: Nat) -> [Nat; 3] {
        let mut a = 0;
        while 3 * a * a * a <= v {
            let mut b = a;
            while 2 * b * b * b <= v - a * a * a {
                let rest = v - a * a * a - b * b * b;
                let c = icbrt(rest);
                if c * c * c == rest {
                    return [a, b, c];
                }
                b += 1;
            }
            a += 1;
        }
        unreachable!("{v} is marked as a sum of three cubes")
    }

    /// `m` as six cubes, if possible.
    pub fn six_cubes(&self, m: Nat) -> Option<[Nat; 6]> {
        if m > self.limit {
            return None;
        }
        let split = self
            .sums3
            .iter()
            .map(|&s| s as Nat)
            .take_while(|&s| 2 * s <= m)
            .find(|&s| self.is_sum3[(m - s) as usize])?;
        let [a, b, c] = Self::three_cubes(split);
        let [d, e, f] = Self::three_cubes(m - split);
        Some([a, b, c, d, e, f])
    }

    /// Seven nondecreasing cube roots summing (in cubes) to `n`.
    ///
    /// The leading cube is `(icbrt(n) - t)^3` for the smallest workable shift
    /// `t`; shifts continue until the remainder leaves the table.
    pub fn greedy7(&self, n: Nat) -> Result<[Nat; 7]> {
        let top = icbrt(n);
        if n - top * top * top > self.limit {
            return Err(Error::InputTooLarge { n, limit: self.limit });
        }
        for base in (0..=top).rev() {
            let m = n - base * base * base;
            if m > self.limit {
                break;
            }
            if let Some(six) = self.six_cubes(m) {
                let mut roots = [0; 7];
                roots[..6].copy_from_slice(&six);
                roots[6] = base;
                roots.sort_unstable();
                return Ok(roots);
            }
        }
        Err(Error::NoDecompositionFound(n))
    }
}

/// Seven-cube decomposition of a single `n`; see [`CubeTable::greedy7`].
pub fn cube_greedy7(n: Nat) -> Result<[Nat; 7]> {
    CubeTable::new(n.min(CUBE_TABLE_CAP))?.greedy7(n)
}
