use thiserror::Error;

use crate::lengths::SignVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length vector needs at least 3 entries, got {0}")]
    TooFewLengths(usize),

    #[error("length entry {index} is {value}; every length must be strictly positive")]
    NonPositiveLength { index: usize, value: String },

    #[error("cannot parse {what} literal {literal:?}")]
    Parse { what: &'static str, literal: String },

    #[error("length vector is not generic: signs {signs} give a vanishing signed sum")]
    NonGeneric { signs: SignVector },

    #[error("total degree is {got}, expected m - 3 = {expected}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("exponent vector has {got} entries but the length vector has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} needs {needed} bits, more than the {limit} a subset mask can hold")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("signed count {count} is not divisible by {divisor}")]
    ParityViolation { count: String, divisor: u32 },

    #[error("{0}")]
    Range(String),

    #[error("equilateral polygon spaces are non-generic for even m = {0}")]
    EvenM(usize),

    #[error("{what} evaluated to the non-integer {value}")]
    NotIntegral { what: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
