use thiserror::Error;

use crate::arith::Nat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be nonzero")]
    Zero { what: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(Nat),

    #[error("{0} is not a sum of two squares: some prime 3 (mod 4) divides it to an odd power")]
    GirardViolation(Nat),

    #[error("{p} is not of the form x^2 + {d}*y^2")]
    NotRepresentable { d: Nat, p: Nat },

    #[error("{0} has the form 4^r(8s+7) and is not a sum of three squares")]
    IneligibleForm(Nat),

    #[error("search for a decomposition of {0} exhausted its budget")]
    SearchExhausted(Nat),

    #[error("no shift t <= {t_max} leaves a three-square remainder for {n}")]
    ShiftExhausted { n: Nat, t_max: u32 },

    #[error("part {root}^2 of {n} lies outside its basis set")]
    PartOutOfBasis { n: Nat, root: Nat },

    #[error("no seven-cube decomposition found for {0}")]
    NoDecompositionFound(Nat),

    #[error("input {n} exceeds the guard {limit}")]
    InputTooLarge { n: Nat, limit: Nat },
}

impl Error {
    /// Short machine-readable tag used in audit reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Zero { .. } => "zero",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotPrime(_) => "not_prime",
            Error::GirardViolation(_) => "girard_violation",
            Error::NotRepresentable { .. } => "not_representable",
            Error::IneligibleForm(_) => "ineligible_form",
            Error::SearchExhausted(_) => "search_exhausted",
            Error::ShiftExhausted { .. } => "shift_exhausted",
            Error::PartOutOfBasis { .. } => "part_out_of_basis",
            Error::NoDecompositionFound(_) => "no_decomposition_found",
            Error::InputTooLarge { .. } => "input_too_large",
        }
    }
}
