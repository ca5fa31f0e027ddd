//! Three squares: the `4^r(8s+7)` eligibility test and a randomized
//! constructive decomposition.

use serde::Serialize;

use crate::arith::{bit_length, is_prime, isqrt, strip_four_power, Nat};
use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::two_squares::{prime_two_squares, two_squares_any};

/// Inputs (after removing factors of 4) below this are solved by search.
pub const BRUTE_FORCE_BELOW: Nat = 10_000;
/// Random draws per bit of input before falling back to a deterministic scan.
pub const DRAWS_PER_BIT: u32 = 200;

/// `x^2 + y^2 + z^2 = target` with `x <= y <= z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThreeSquareRep {
    pub x: Nat,
    pub y: Nat,
    pub z: Nat,
    pub target: Nat,
}

impl ThreeSquareRep {
    pub(crate) fn from_roots(mut roots: [Nat; 3]) -> Self {
        roots.sort_unstable();
        let [x, y, z] = roots;
        Self { x, y, z, target: x * x + y * y + z * z }
    }

    pub fn roots(&self) -> [Nat; 3] {
        [self.x, self.y, self.z]
    }

    pub fn verify(&self) -> bool {
        self.x <= self.y
            && self.y <= self.z
            && self.roots().iter().try_fold(0 as Nat, |acc, &r| {
                r.checked_mul(r).and_then(|s| acc.checked_add(s))
            }) == Some(self.target)
    }

    fn scaled(self, factor: Nat) -> Self {
        Self::from_roots(self.roots().map(|r| r * factor))
    }
}

/// True iff `n` is not of the form `4^r(8s+7)`.
pub fn eligible(n: Nat) -> bool {
    match strip_four_power(n) {
        Ok((_, q)) => q % 8 != 7,
        Err(_) => true,
    }
}

/// Lexicographically first canonical triple, if any.
pub(crate) fn brute_three(n: Nat) -> Option<ThreeSquareRep> {
    let mut x: Nat = 0;
    while 3 * x * x <= n {
        let after_x = n - x * x;
        let mut y = x;
        while 2 * y * y <= after_x {
            let rest = after_x - y * y;
            let z = isqrt(rest);
            if z * z == rest {
                return Some(ThreeSquareRep::from_roots([x, y, z]));
            }
            y += 1;
        }
        x += 1;
    }
    None
}

/// Tries to write `d` (the value left after subtracting `x^2`) as two
/// squares cheaply: small values, perfect squares, primes `1 (mod 4)` and
/// twice such primes.
fn cheap_two_squares(d: Nat, rng: &mut RandomSource) -> Result<Option<(Nat, Nat)>> {
    match d {
        0 => return Ok(Some((0, 0))),
        1 => return Ok(Some((0, 1))),
        2 => return Ok(Some((1, 1))),
        _ => {}
    }
    let r = isqrt(d);
    if r * r == d {
        return Ok(Some((0, r)));
    }
    if d % 4 == 1 && is_prime(d) {
        let rep = prime_two_squares(d, rng)?;
        return Ok(Some((rep.x, rep.y)));
    }
    if d % 8 == 2 && is_prime(d / 2) {
        // 2(a^2 + b^2) = (a + b)^2 + (b - a)^2
        let rep = prime_two_squares(d / 2, rng)?;
        return Ok(Some((rep.y - rep.x, rep.x + rep.y)));
    }
    Ok(None)
}

/// Randomized search on `q` with `q mod 4 != 0`, `q mod 8 != 7`.
fn random_three(q: Nat, rng: &mut RandomSource) -> Result<Option<ThreeSquareRep>> {
    // q = 3 (mod 8): x odd, q - x^2 = 2 (mod 8) = 2p.
    // q = 1, 5: x even, q - x^2 = 1 (mod 4).
    // q = 2, 6: x odd, q - x^2 = 1 (mod 4).
    let parity: Nat = if q % 8 == 1 || q % 8 == 5 { 0 } else { 1 };
    let root = isqrt(q);
    let slots = (root - parity) / 2 + 1;
    for _ in 0..DRAWS_PER_BIT * bit_length(q) {
        let x = 2 * rng.uniform_below(slots) + parity;
        if let Some((y, z)) = cheap_two_squares(q - x * x, rng)? {
            return Ok(Some(ThreeSquareRep::from_roots([x, y, z])));
        }
    }
    Ok(None)
}

/// Deterministic scan over `x`, decomposing `q - x^2` through factorization.
fn scan_three(q: Nat, rng: &mut RandomSource) -> Result<Option<ThreeSquareRep>> {
    for x in 0..=isqrt(q) {
        match two_squares_any(q - x * x, rng) {
            Ok(rep) => return Ok(Some(ThreeSquareRep::from_roots([x, rep.x, rep.y]))),
            Err(Error::GirardViolation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Decomposes `n` as three squares when [`eligible`].
pub fn three_squares(n: Nat, rng: &mut RandomSource) -> Result<ThreeSquareRep> {
    if n == 0 {
        return Ok(ThreeSquareRep::from_roots([0, 0, 0]));
    }
    if !eligible(n) {
        return Err(Error::IneligibleForm(n));
    }
    let (r, q) = strip_four_power(n)?;
    let rep = if q < BRUTE_FORCE_BELOW {
        brute_three(q)
    } else {
        match random_three(q, rng)? {
            Some(rep) => Some(rep),
            None => scan_three(q, rng)?,
        }
    };
    let rep = rep.ok_or(Error::SearchExhausted(n))?.scaled(1 << r);
    debug_assert!(rep.verify() && rep.target == n);
    Ok(rep)
}
