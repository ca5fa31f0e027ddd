//! Sums of two squares: prime decomposition from a square root of -1,
//! Cornacchia's algorithm, the representability criterion, composite
//! decomposition, and the `r2` counting formula.

use serde::Serialize;

use crate::arith::{factorize, is_prime, isqrt, mul_mod, pow_mod, Nat};
use crate::error::{Error, Result};
use crate::random::RandomSource;

const MAX_DRAWS: usize = 256;

/// `x^2 + y^2 = target` with `x <= y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoSquareRep {
    pub x: Nat,
    pub y: Nat,
    pub target: Nat,
}

impl TwoSquareRep {
    pub(crate) fn new(a: Nat, b: Nat) -> Self {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        Self { x, y, target: x * x + y * y }
    }

    pub fn roots(&self) -> [Nat; 2] {
        [self.x, self.y]
    }

    pub fn verify(&self) -> bool {
        self.x <= self.y
            && self
                .x
                .checked_mul(self.x)
                .zip(self.y.checked_mul(self.y))
                .and_then(|(a, b)| a.checked_add(b))
                == Some(self.target)
    }
}

/// A square root of -1 modulo a prime `p = 1 (mod 4)`.
///
/// Draws random `b` and takes `b^((p-1)/4)`; this squares to -1 exactly
/// when `b` is a quadratic nonresidue, so two draws are expected.
pub fn sqrt_neg_one_mod_p(p: Nat, rng: &mut RandomSource) -> Result<Nat> {
    if p % 4 != 1 {
        return Err(Error::InvalidArgument(format!("{p} is not 1 mod 4")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let exp = (p - 1) / 4;
    for _ in 0..MAX_DRAWS {
        let b = rng.uniform_inclusive(2, p - 1);
        let u = pow_mod(b, exp, p);
        if mul_mod(u, u, p) == p - 1 {
            return Ok(u);
        }
    }
    Err(Error::SearchExhausted(p))
}

/// Euclidean remainder sequence on `(a, b)`, stopped at the first
/// remainder whose square is below `bound`.
fn first_remainder_below_sqrt(mut a: Nat, mut b: Nat, bound: Nat) -> Nat {
    let limit = isqrt(bound);
    while b > limit {
        (a, b) = (b, a % b);
    }
    b
}

/// `p = x^2 + y^2` for `p = 2` or a prime `p = 1 (mod 4)`.
pub fn prime_two_squares(p: Nat, rng: &mut RandomSource) -> Result<TwoSquareRep> {
    if p == 2 {
        return Ok(TwoSquareRep::new(1, 1));
    }
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::GirardViolation(p));
    }
    let u = sqrt_neg_one_mod_p(p, rng)?;
    let x = first_remainder_below_sqrt(p, u, p);
    let y = isqrt(p - x * x);
    let rep = TwoSquareRep::new(x, y);
    debug_assert_eq!(rep.target, p);
    Ok(rep)
}

/// Square root of `a` modulo an odd prime `p` by Tonelli-Shanks.
pub(crate) fn sqrt_mod_prime(a: Nat, p: Nat, rng: &mut RandomSource) -> Option<Nat> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = loop {
        let z = rng.uniform_inclusive(2, p - 1);
        if pow_mod(z, (p - 1) / 2, p) == p - 1 {
            break z;
        }
    };
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Solves `x^2 + d*y^2 = p` for a prime `p` and `1 <= d < p`.
pub fn cornacchia(d: Nat, p: Nat, rng: &mut RandomSource) -> Result<(Nat, Nat)> {
    if d == 0 || d >= p {
        return Err(Error::InvalidArgument(format!("need 1 <= d < p, got d = {d}, p = {p}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let not_rep = Error::NotRepresentable { d, p };
    if p == 2 {
        // d = 1 is the only admissible coefficient.
        return Ok((1, 1));
    }
    let mut root = sqrt_mod_prime(p - d, p, rng).ok_or(not_rep.clone())?;
    if 2 * root < p {
        root = p - root;
    }
    let x = first_remainder_below_sqrt(p, root, p);
    let rest = p - x * x;
    if rest % d != 0 {
        return Err(not_rep);
    }
    let y = isqrt(rest / d);
    if y == 0 || y * y * d != rest {
        return Err(not_rep);
    }
    Ok((x, y))
}

/// True iff every prime `3 (mod 4)` divides `n` to an even power.
pub fn is_sum_two_squares(n: Nat) -> bool {
    if n == 0 {
        return true;
    }
    factorize(n)
        .expect("n is nonzero")
        .pairs()
        .iter()
        .all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

type Gaussian = (i128, i128);

fn gauss_mul(a: Gaussian, b: Gaussian) -> Gaussian {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gauss_pow(mut base: Gaussian, mut e: u32) -> Gaussian {
    let mut acc = (1, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = gauss_mul(acc, base);
        }
        base = gauss_mul(base, base);
        e >>= 1;
    }
    acc
}

/// Every unordered unsigned representation of `n` as two squares, via the
/// Gaussian factorization of `n`. Empty when `n` is not representable.
fn all_two_square_reps(n: Nat, rng: &mut RandomSource) -> Result<Vec<TwoSquareRep>> {
    if n == 0 {
        return Ok(vec![TwoSquareRep::new(0, 0)]);
    }
    if n > (i128::MAX as Nat) {
        return Err(Error::InputTooLarge { n, limit: i128::MAX as Nat });
    }
    let mut candidates: Vec<Gaussian> = vec![(1, 0)];
    for &(p, e) in factorize(n)?.pairs() {
        let options: Vec<Gaussian> = match p % 4 {
            2 => vec![gauss_pow((1, 1), e)],
            3 if e % 2 == 1 => return Ok(Vec::new()),
            3 => vec![(p.pow(e / 2) as i128, 0)],
            _ => {
                let rep = prime_two_squares(p, rng)?;
                let pi = (rep.x as i128, rep.y as i128);
                let conj = (pi.0, -pi.1);
                (0..=e).map(|k| gauss_mul(gauss_pow(pi, k), gauss_pow(conj, e - k))).collect()
            }
        };
        candidates = candidates
            .iter()
            .flat_map(|&c| options.iter().map(move |&o| gauss_mul(c, o)))
            .collect();
    }
    let mut reps: Vec<TwoSquareRep> = candidates
        .into_iter()
        .map(|(a, b)| TwoSquareRep::new(a.unsigned_abs(), b.unsigned_abs()))
        .collect();
    reps.sort_unstable_by_key(|r| r.x);
    reps.dedup();
    Ok(reps)
}

/// A representation of any representable `n`, choosing the one with the
/// smallest first coordinate.
pub fn two_squares_any(n: Nat, rng: &mut RandomSource) -> Result<TwoSquareRep> {
    let reps = all_two_square_reps(n, rng)?;
    let rep = *reps.first().ok_or(Error::GirardViolation(n))?;
    debug_assert_eq!(rep.target, n);
    Ok(rep)
}

/// Number of ordered signed pairs `(a, b)` with `a^2 + b^2 = n`.
pub fn r2(n: Nat) -> Result<Nat> {
    if n == 0 {
        return Err(Error::Zero { what: "r2 argument" });
    }
    let sums = crate::arith::divisor_class_sums(n)?;
    Ok(4 * (sums.count1 - sums.count3))
}
