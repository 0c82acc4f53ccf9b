use crate::numerics::SeriesResult;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("q = 1: use classical limit path")]
    ClassicalLimit,

    #[error("pole: 1 + q^{index} = 0")]
    Pole { index: u64 },

    #[error("Teichmüller undefined at non-unit {0}")]
    NonUnit(String),

    #[error("binomial series diverges: base is not congruent to 1 mod p")]
    Divergent,

    #[error("division by a p-adic zero")]
    DivisionByZero,

    #[error("character has even conductor {0}")]
    EvenConductor(u64),

    #[error("conductor {conductor} does not divide F = {modulus}")]
    ConductorMismatch { conductor: u64, modulus: u64 },

    #[error("character syntax error: {0}")]
    CharacterSyntax(String),

    #[error("series did not converge before index {}", .0.last_index)]
    NonConvergence(Box<SeriesResult>),
}
