//! Constructive sums of squares and thin bases of squares.
//!
//! The crate covers two-, three- and four-square decompositions, the
//! divisor-class counting formulas for `r2` and `r4`, a residue-class
//! classification of primes, the greedy shift decomposition over a thin
//! basis of squares, its order-seven cube analogue, and audit tooling that
//! measures basis cardinality and coverage against brute-force oracles.
//!
//! All integers are [`Nat`] (`u128`). Randomized operations take an explicit
//! [`RandomSource`]; the same seed always yields the same output.

pub mod arith;
pub mod audit;
pub mod cli;
pub mod error;
pub mod four_squares;
pub mod oracle;
pub mod prime_classify;
pub mod random;
pub mod thin_basis;
pub mod three_squares;
pub mod two_squares;

pub use arith::{divisor_class_sums, factorize, is_prime, isqrt, strip_four_power, Factorization, Nat};
pub use error::{Error, Result};
pub use four_squares::{four_squares, r4, two_s_squares, FourSquareRep, MultiSquareRep};
pub use prime_classify::{classify, PrimeClassification, ResidueClass};
pub use random::RandomSource;
pub use thin_basis::{BasisParams, GreedyTrace, Scale, ThinBasis, TracePath};
pub use three_squares::{eligible, three_squares, ThreeSquareRep};
pub use two_squares::{
    cornacchia, is_sum_two_squares, prime_two_squares, r2, sqrt_neg_one_mod_p, two_squares_any,
    TwoSquareRep,
};
