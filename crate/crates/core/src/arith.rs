//! Integer primitives: roots, primality, factorization, divisor classes.

use crate::error::{Error, Result};

/// Nonnegative integer used throughout the crate.
///
/// 128 bits leave room for squared intermediates of 64-bit values, which
/// covers every randomized search the crate runs (inputs up to 2^96).
pub type Nat = u128;

const TRIAL_LIMIT: Nat = 1_000_000;
const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];
// Deterministic for every n < 3.3 * 10^24, in particular all n < 2^64.
const MR_BASES_64: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_ROUNDS_WIDE: usize = 64;

pub fn bit_length(n: Nat) -> u32 {
    128 - n.leading_zeros()
}

/// `floor(sqrt(n))` by Newton iteration on integers.
pub fn isqrt(n: Nat) -> Nat {
    if n < 2 {
        return n;
    }
    // 2^ceil(bits/2) is always an overestimate, so the iteration decreases
    // monotonically to the floor root.
    let mut x: Nat = 1 << bit_length(n).div_ceil(2);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

/// `floor(cbrt(n))`.
pub fn icbrt(n: Nat) -> Nat {
    if n < 2 {
        return n;
    }
    let mut x: Nat = 1 << bit_length(n).div_ceil(3);
    loop {
        let y = (2 * x + n / (x * x)) / 3;
        if y >= x {
            break;
        }
        x = y;
    }
    let cube = |v: Nat| v.checked_mul(v).and_then(|s| s.checked_mul(v));
    while cube(x).is_none_or(|c| c > n) {
        x -= 1;
    }
    while cube(x + 1).is_some_and(|c| c <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: Nat) -> bool {
    let r = isqrt(n);
    r * r == n
}

pub fn gcd(mut a: Nat, mut b: Nat) -> Nat {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mul_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    debug_assert!(m > 0);
    if m <= u64::MAX as Nat {
        return (a % m) * (b % m) % m;
    }
    let mut a = a % m;
    let mut b = b % m;
    let mut acc: Nat = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    // a, b < m
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub fn pow_mod(base: Nat, mut exp: Nat, m: Nat) -> Nat {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc: Nat = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: Nat, d: Nat, s: u32, a: Nat) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test: exact below 2^64, error below 2^-128 above.
pub fn is_prime(n: Nat) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = p as Nat;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 101 * 101 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    if n <= u64::MAX as Nat {
        return MR_BASES_64.iter().all(|&a| miller_rabin_round(n, d, s, a));
    }
    // Bases are derived from n itself so the test stays a pure function.
    let mut rng = crate::random::RandomSource::new((n as u64) ^ ((n >> 64) as u64));
    (0..MR_ROUNDS_WIDE).all(|_| {
        let a = rng.uniform_inclusive(2, n - 2);
        miller_rabin_round(n, d, s, a)
    })
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(Nat, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(Nat, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Recomposed value, `None` on overflow.
    pub fn value(&self) -> Option<Nat> {
        self.pairs.iter().try_fold(1 as Nat, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    /// All divisors, unsorted.
    pub fn divisors(&self) -> Vec<Nat> {
        let mut divs: Vec<Nat> = vec![1];
        for &(p, e) in &self.pairs {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }

    fn push(&mut self, p: Nat) {
        match self.pairs.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => self.pairs.push((p, 1)),
        }
    }
}

fn brent_rho(n: Nat, c: Nat, start: Nat) -> Option<Nat> {
    const BATCH: u64 = 128;
    let f = |v: Nat| (mul_mod(v, v, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (start % n, 1u64, 1 as Nat, 1 as Nat);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: Nat, out: &mut Factorization) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if is_square(n) {
        let r = isqrt(n);
        split_composite(r, out);
        split_composite(r, out);
        return;
    }
    let mut c: Nat = 1;
    let d = loop {
        if let Some(d) = brent_rho(n, c, c + 1) {
            break d;
        }
        c += 1;
    };
    split_composite(d, out);
    split_composite(n / d, out);
}

/// Factor `n` by trial division up to 10^6, then Brent's Pollard rho.
pub fn factorize(n: Nat) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero { what: "factorize input" });
    }
    let mut rest = n;
    let mut out = Factorization::default();
    let mut divide_out = |p: Nat, rest: &mut Nat| {
        while *rest % p == 0 {
            *rest /= p;
            out.push(p);
        }
    };
    divide_out(2, &mut rest);
    divide_out(3, &mut rest);
    let mut p: Nat = 5;
    let mut step = 2;
    while p <= TRIAL_LIMIT && p * p <= rest {
        divide_out(p, &mut rest);
        // once past the small primes, skip the scan when the cofactor is prime
        if p == 1009 && is_prime(rest) {
            break;
        }
        p += step;
        step = 6 - step;
    }
    if rest > 1 && (p * p > rest || is_prime(rest)) {
        out.push(rest);
    } else {
        split_composite(rest, &mut out);
    }
    out.pairs.sort_unstable();
    Ok(out)
}

/// Returns `(r, q)` with `n = 4^r * q` and `q mod 4 != 0`.
pub fn strip_four_power(n: Nat) -> Result<(u32, Nat)> {
    if n == 0 {
        return Err(Error::Zero { what: "strip_four_power input" });
    }
    let r = n.trailing_zeros() / 2;
    Ok((r, n >> (2 * r)))
}

/// Divisor counts and sums split by residue mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorClassSums {
    /// Number of divisors congruent to 1 mod 4.
    pub count1: Nat,
    /// Number of divisors congruent to 3 mod 4.
    pub count3: Nat,
    /// Sum of the divisors not divisible by 4.
    pub sum_not_div4: Nat,
}

pub fn divisor_class_sums(n: Nat) -> Result<DivisorClassSums> {
    let f = factorize(n)?;
    let mut sums = DivisorClassSums { count1: 0, count3: 0, sum_not_div4: 0 };
    for d in f.divisors() {
        match d % 4 {
            1 => sums.count1 += 1,
            3 => sums.count3 += 1,
            _ => {}
        }
        if d % 4 != 0 {
            sums.sum_not_div4 += d;
        }
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(25), 5);
        assert_eq!(isqrt(24), 4);
        assert_eq!(isqrt(u128::MAX), u64::MAX as Nat);
        assert_eq!(isqrt((1 << 96) - 1), (1 << 48) - 1);
    }

    #[test]
    fn isqrt_floor_property_to_a_million() {
        for n in 0..=1_000_000u128 {
            let r = isqrt(n);
            assert!(r * r <= n && n < (r + 1) * (r + 1), "n = {n}");
        }
    }

    #[test]
    fn icbrt_small_and_edges() {
        for n in 0..20_000u128 {
            let r = icbrt(n);
            assert!(r * r * r <= n && n < (r + 1).pow(3), "n = {n}");
        }
        assert_eq!(icbrt(u128::MAX), 6_981_463_658_331);
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(561));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(is_prime((1 << 89) - 1));
        assert!(!is_prime(((1u128 << 61) - 1) * ((1 << 31) - 1)));
    }

    #[test]
    fn is_prime_matches_trial_division() {
        for n in 2..=100_000u64 {
            assert_eq!(is_prime(n as Nat), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(360).unwrap().pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(9991).unwrap().pairs(), &[(97, 1), (103, 1)]);
        assert_eq!(factorize(0), Err(Error::Zero { what: "factorize input" }));
    }

    #[test]
    fn factorize_large_semiprimes() {
        let p: Nat = 1_000_000_007;
        let q: Nat = 998_244_353;
        assert_eq!(factorize(p * q).unwrap().pairs(), &[(q, 1), (p, 1)]);
        assert_eq!(factorize(p * p * 3).unwrap().pairs(), &[(3, 1), (p, 2)]);
        let big = (1u128 << 61) - 1;
        assert_eq!(factorize(big * 1_000_003).unwrap().pairs(), &[(1_000_003, 1), (big, 1)]);
    }

    #[test]
    fn factorize_round_trip() {
        for n in 1..=100_000u128 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), Some(n));
            let primes: Vec<Nat> = f.pairs().iter().map(|&(p, _)| p).collect();
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
            assert!(primes.iter().all(|&p| is_prime(p)));
        }
    }

    #[test]
    fn strip_four_power_examples() {
        assert_eq!(strip_four_power(7), Ok((0, 7)));
        assert_eq!(strip_four_power(28), Ok((1, 7)));
        assert_eq!(strip_four_power(448), Ok((3, 7)));
        assert_eq!(strip_four_power(8), Ok((1, 2)));
        assert!(strip_four_power(0).is_err());
        for n in 1..=100_000u128 {
            let (r, q) = strip_four_power(n).unwrap();
            assert_eq!(4u128.pow(r) * q, n);
            assert_ne!(q % 4, 0);
        }
    }

    #[test]
    fn divisor_class_sums_examples() {
        let t = |n| {
            let s = divisor_class_sums(n).unwrap();
            (s.count1, s.count3, s.sum_not_div4)
        };
        assert_eq!(t(1), (1, 0, 1));
        assert_eq!(t(5), (2, 0, 6));
        assert_eq!(t(6), (1, 1, 12));
        assert!(divisor_class_sums(0).is_err());
    }

    #[test]
    fn divisor_class_sums_match_enumeration() {
        for n in 1..=10_000u128 {
            let divs: Vec<Nat> = (1..=n).filter(|d| n % d == 0).collect();
            let s = divisor_class_sums(n).unwrap();
            assert_eq!(s.count1, divs.iter().filter(|&&d| d % 4 == 1).count() as Nat);
            assert_eq!(s.count3, divs.iter().filter(|&&d| d % 4 == 3).count() as Nat);
            assert_eq!(s.sum_not_div4, divs.iter().filter(|&&d| d % 4 != 0).sum::<Nat>());
        }
    }
}
