//! Four squares by the randomized `N = x^2 + y^2 + p` search, sums of `2s`
//! squares, and the `r4` counting formula.

use serde::Serialize;

use crate::arith::{bit_length, divisor_class_sums, is_prime, isqrt, strip_four_power, Nat};
use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::three_squares::{eligible, three_squares, BRUTE_FORCE_BELOW, DRAWS_PER_BIT};
use crate::two_squares::{prime_two_squares, two_squares_any};

/// `x^2 + y^2 + z^2 + w^2 = target`, roots nondecreasing.
///
/// `trials` counts the random `(x, y)` pairs drawn; it is zero when the
/// value was solved by direct search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourSquareRep {
    pub x: Nat,
    pub y: Nat,
    pub z: Nat,
    pub w: Nat,
    pub target: Nat,
    pub trials: u64,
}

impl FourSquareRep {
    pub(crate) fn from_roots(mut roots: [Nat; 4], trials: u64) -> Self {
        roots.sort_unstable();
        let [x, y, z, w] = roots;
        Self { x, y, z, w, target: x * x + y * y + z * z + w * w, trials }
    }

    pub fn roots(&self) -> [Nat; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn verify(&self) -> bool {
        let r = self.roots();
        r.windows(2).all(|w| w[0] <= w[1])
            && r.iter().try_fold(0 as Nat, |acc, &v| {
                v.checked_mul(v).and_then(|s| acc.checked_add(s))
            }) == Some(self.target)
    }
}

/// `2s` nondecreasing roots whose squares sum to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiSquareRep {
    pub parts: Vec<Nat>,
    pub target: Nat,
}

impl MultiSquareRep {
    pub fn verify(&self) -> bool {
        self.parts.len() >= 2
            && self.parts.len() % 2 == 0
            && self.parts.windows(2).all(|w| w[0] <= w[1])
            && self.parts.iter().try_fold(0 as Nat, |acc, &v| {
                v.checked_mul(v).and_then(|s| acc.checked_add(s))
            }) == Some(self.target)
    }
}

fn brute_four(n: Nat) -> Option<[Nat; 4]> {
    let mut x: Nat = 0;
    while 4 * x * x <= n {
        let mut y = x;
        while 3 * y * y <= n - x * x {
            let after_y = n - x * x - y * y;
            let mut z = y;
            while 2 * z * z <= after_y {
                let rest = after_y - z * z;
                let w = isqrt(rest);
                if w * w == rest {
                    return Some([x, y, z, w]);
                }
                z += 1;
            }
            y += 1;
        }
        x += 1;
    }
    None
}

/// Random search for `q = x^2 + y^2 + p` with `p` prime `1 (mod 4)` (or 1).
fn random_four(q: Nat, rng: &mut RandomSource) -> Result<(Option<[Nat; 4]>, u64)> {
    // parities of (x, y) that make q - x^2 - y^2 = 1 (mod 4)
    let (px, py): (Nat, Nat) = match q % 4 {
        1 => (0, 0),
        2 => (0, 1),
        _ => (1, 1),
    };
    let root = isqrt(q);
    let mut trials = 0u64;
    for _ in 0..DRAWS_PER_BIT * bit_length(q) {
        trials += 1;
        let x = 2 * rng.uniform_below((root - px) / 2 + 1) + px;
        let y = 2 * rng.uniform_below((root - py) / 2 + 1) + py;
        let Some(d) = q.checked_sub(x * x + y * y) else {
            continue;
        };
        if d == 1 {
            return Ok((Some([x, y, 0, 1]), trials));
        }
        if is_prime(d) {
            let rep = prime_two_squares(d, rng)?;
            return Ok((Some([x, y, rep.x, rep.y]), trials));
        }
    }
    Ok((None, trials))
}

/// Deterministic fallback: peel one square so the rest is three-square
/// eligible, then decompose the rest.
fn scan_four(q: Nat, rng: &mut RandomSource) -> Result<Option<[Nat; 4]>> {
    for x in 0..=isqrt(q) {
        let rest = q - x * x;
        if eligible(rest) {
            let rep = three_squares(rest, rng)?;
            return Ok(Some([x, rep.x, rep.y, rep.z]));
        }
    }
    Ok(None)
}

/// Four-square decomposition of any `n`.
pub fn four_squares(n: Nat, rng: &mut RandomSource) -> Result<FourSquareRep> {
    if n == 0 {
        return Ok(FourSquareRep::from_roots([0; 4], 0));
    }
    let (r, q) = strip_four_power(n)?;
    let (roots, trials) = if q < BRUTE_FORCE_BELOW {
        (brute_four(q), 0)
    } else {
        match random_four(q, rng)? {
            (Some(roots), trials) => (Some(roots), trials),
            (None, trials) => (scan_four(q, rng)?, trials),
        }
    };
    let roots = roots.ok_or(Error::SearchExhausted(n))?.map(|v| v << r);
    let rep = FourSquareRep::from_roots(roots, trials);
    debug_assert!(rep.verify() && rep.target == n);
    Ok(rep)
}

/// `n` as a sum of `2s` squares. For `s = 1` this is a two-square
/// decomposition; for `s >= 2` a four-square decomposition padded with zeros.
pub fn two_s_squares(n: Nat, s: u32, rng: &mut RandomSource) -> Result<MultiSquareRep> {
    let parts = match s {
        0 => return Err(Error::InvalidArgument("s must be at least 1".into())),
        1 => two_squares_any(n, rng)?.roots().to_vec(),
        _ => {
            let mut parts = vec![0; 2 * s as usize - 4];
            parts.extend(four_squares(n, rng)?.roots());
            parts.sort_unstable();
            parts
        }
    };
    Ok(MultiSquareRep { parts, target: n })
}

/// Number of ordered signed quadruples with squares summing to `n`.
pub fn r4(n: Nat) -> Result<Nat> {
    if n == 0 {
        return Err(Error::Zero { what: "r4 argument" });
    }
    Ok(8 * divisor_class_sums(n)?.sum_not_div4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_squares_examples() {
        let mut rng = RandomSource::new(0);
        assert_eq!(four_squares(0, &mut rng).unwrap().roots(), [0, 0, 0, 0]);
        assert_eq!(four_squares(7, &mut rng).unwrap().roots(), [1, 1, 1, 2]);
        assert_eq!(four_squares(15, &mut rng).unwrap().roots(), [1, 1, 2, 3]);
        assert_eq!(four_squares(15, &mut rng).unwrap().trials, 0);
    }

    #[test]
    fn four_squares_random_48_bit() {
        let mut rng = RandomSource::new(21);
        for _ in 0..1000 {
            let n = rng.uniform_below(1 << 48);
            let rep = four_squares(n, &mut rng).unwrap();
            assert!(rep.verify());
            assert_eq!(rep.target, n);
        }
    }

    #[test]
    fn four_squares_wide_inputs() {
        let mut rng = RandomSource::new(2);
        for n in [(1u128 << 96) - 1, (1 << 90) * 3 + 7, u64::MAX as Nat] {
            let rep = four_squares(n, &mut rng).unwrap();
            assert!(rep.verify());
            assert_eq!(rep.target, n);
            assert!(rep.trials >= 1);
        }
    }

    #[test]
    fn scan_four_fallback() {
        let mut rng = RandomSource::new(0);
        for q in [10_007u128, 65_535, 1 << 41 | 3] {
            let roots = scan_four(q, &mut rng).unwrap().unwrap();
            assert_eq!(roots.iter().map(|v| v * v).sum::<Nat>(), q);
        }
    }

    #[test]
    fn two_s_squares_examples() {
        let mut rng = RandomSource::new(0);
        assert_eq!(two_s_squares(3, 2, &mut rng).unwrap().parts, vec![0, 1, 1, 1]);
        assert_eq!(two_s_squares(5, 1, &mut rng).unwrap().parts, vec![1, 2]);
        assert_eq!(two_s_squares(7, 1, &mut rng), Err(Error::GirardViolation(7)));
        assert!(two_s_squares(7, 0, &mut rng).is_err());
        let rep = two_s_squares(1_000_003, 5, &mut rng).unwrap();
        assert_eq!(rep.parts.len(), 10);
        assert!(rep.verify());
    }

    #[test]
    fn r4_examples() {
        assert_eq!(r4(1), Ok(8));
        assert_eq!(r4(2), Ok(24));
        assert_eq!(r4(8), Ok(24));
        assert!(r4(0).is_err());
    }

    #[test]
    fn r4_at_least_eight() {
        for n in 1..=20_000 {
            assert!(r4(n).unwrap() >= 8);
        }
    }
}
