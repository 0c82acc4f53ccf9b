//! Exact rationals, q-integers, truncated p-adic arithmetic, Teichmüller
//! lifts and p-adic exponentiation.

mod context;
mod padic;
pub mod rational;
mod series;
mod units;

pub use context::{QContext, DEFAULT_BUFFER, DEFAULT_GUARD, DEFAULT_PRECISION};
pub use padic::{PadicNumber, EXACT};
pub use rational::{binom_rat, q_int, q_int_alt, Rational};
pub use series::{guarded_sum, SeriesResult};
pub use units::{angle_bracket, binom_padic, padic_pow, teichmuller, Exponent};

/// `reduce_mod_pN`: the p-adic image of an exact rational with `n`
/// significant digits.
pub fn reduce(r: &Rational, p: u64, n: u32) -> PadicNumber {
    PadicNumber::from_rational(r, p, n)
}
