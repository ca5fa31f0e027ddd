//! Primes by residue class mod 8, each with a representation using the
//! fewest squares, all nonzero.

use serde::Serialize;

use crate::arith::{is_prime, Nat};
use crate::error::{Error, Result};
use crate::four_squares::four_squares;
use crate::random::RandomSource;
use crate::three_squares::three_squares;
use crate::two_squares::prime_two_squares;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueClass {
    Two,
    OneMod8,
    ThreeMod8,
    FiveMod8,
    SevenMod8,
}

impl ResidueClass {
    pub fn of(p: Nat) -> Self {
        match p % 8 {
            1 => ResidueClass::OneMod8,
            3 => ResidueClass::ThreeMod8,
            5 => ResidueClass::FiveMod8,
            7 => ResidueClass::SevenMod8,
            _ => ResidueClass::Two,
        }
    }

    /// Number of squares in the minimal representation.
    pub fn square_count(&self) -> usize {
        match self {
            ResidueClass::Two | ResidueClass::OneMod8 | ResidueClass::FiveMod8 => 2,
            ResidueClass::ThreeMod8 => 3,
            ResidueClass::SevenMod8 => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub p: Nat,
    pub residue_class: ResidueClass,
    /// Positive roots, nondecreasing.
    pub parts: Vec<Nat>,
}

pub fn classify(p: Nat, rng: &mut RandomSource) -> Result<PrimeClassification> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let residue_class = ResidueClass::of(p);
    let parts = match residue_class {
        ResidueClass::Two | ResidueClass::OneMod8 | ResidueClass::FiveMod8 => {
            prime_two_squares(p, rng)?.roots().to_vec()
        }
        ResidueClass::ThreeMod8 => three_squares(p, rng)?.roots().to_vec(),
        ResidueClass::SevenMod8 => four_squares(p, rng)?.roots().to_vec(),
    };
    // A zero part would put p in a class with fewer squares.
    assert!(parts.iter().all(|&v| v > 0), "zero part for prime {p}: {parts:?}");
    assert_eq!(parts.len(), residue_class.square_count());
    Ok(PrimeClassification { p, residue_class, parts })
}
