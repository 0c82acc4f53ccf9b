//! Verification harnesses: the power-sum expansion theorem for
//! `2 sum (-1)^j / [j]_q^r` over units, congruences of `l_{p,q}`, exact
//! identity suites, and the `q -> 1` limit.

mod congruence;
mod identities;
mod limits;
mod expansion;

pub use congruence::{congruence_check, congruence_scan, CongruenceCheck, ScanReport, ScanSample, PairDifference};
pub use identities::{binom_identities_check, identity_suite, remark_check, CheckResult, IdentityReport, RemarkReport};
pub use limits::{bernoulli_numbers, classical_euler_numbers, classical_limit_check, LimitEntry, LimitReport};
pub use expansion::{
    expansion_grid, expansion_lhs, expansion_lhs_exact, expansion_report, expansion_rhs_rederived,
    expansion_rhs_stated, ExpansionReport, Outcome, Step,
};

use crate::numerics::rational::{valuation, Rational};
use crate::numerics::PadicNumber;
use num_traits::Zero;

/// Residual valuation reported when a difference vanishes at every digit
/// available.
pub const INFINITE_VALUATION: i64 = i64::MAX;

/// `v_p(x - y)`, or [`INFINITE_VALUATION`] when the difference is zero to
/// the precision carried.
pub fn residual(x: &PadicNumber, y: &PadicNumber) -> i64 {
    let d = x - y;
    if d.is_zero() {
        INFINITE_VALUATION
    } else {
        d.valuation()
    }
}

/// `v_p(d)` for an exact rational difference known up to terms of valuation
/// at least `bound`; anything at or past the bound counts as zero.
pub fn residual_rational(d: &Rational, p: u64, bound: i64) -> i64 {
    if d.is_zero() {
        return INFINITE_VALUATION;
    }
    match valuation(d, p) {
        Some(v) if v < bound => v,
        _ => INFINITE_VALUATION,
    }
}

/// Runs `f` over `items` on a pool of `jobs` workers (sequentially when
/// `jobs <= 1`), keeping input order.
pub fn run_parallel<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}
