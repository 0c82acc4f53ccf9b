use super::context::QContext;
use super::padic::{PadicNumber, EXACT};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A p-adic series value together with how it was truncated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: PadicNumber,
    /// Index of the last term that was summed.
    pub last_index: usize,
    /// Lower bound on the valuation of every omitted term.
    pub tail_valuation_bound: i64,
    pub converged: bool,
}

impl SeriesResult {
    /// A value with no truncation at all.
    pub fn exact(value: PadicNumber) -> Self {
        Self {
            value,
            last_index: 0,
            tail_valuation_bound: EXACT,
            converged: true,
        }
    }

    /// Multiplies the value by `factor`; the tail scales with it.
    pub fn scale(self, factor: &PadicNumber) -> Self {
        let shift = if factor.is_zero() { 0 } else { factor.valuation() };
        Self {
            value: &self.value * factor,
            tail_valuation_bound: (self.tail_valuation_bound + shift).min(EXACT),
            ..self
        }
    }

    /// Product of two truncated values. The omitted part of the product is
    /// bounded by the worse of the two tails shifted by the other factor.
    pub fn times(self, other: &SeriesResult) -> Self {
        let va = if self.value.is_zero() { 0 } else { self.value.valuation() };
        let vb = if other.value.is_zero() { 0 } else { other.value.valuation() };
        let tail = (self.tail_valuation_bound + vb).min(other.tail_valuation_bound + va);
        Self {
            value: &self.value * &other.value,
            last_index: self.last_index.max(other.last_index),
            tail_valuation_bound: tail.min(EXACT),
            converged: self.converged && other.converged,
        }
    }

    /// Adds another truncated value.
    pub fn plus(self, other: &SeriesResult) -> Self {
        Self {
            value: &self.value + &other.value,
            last_index: self.last_index.max(other.last_index),
            tail_valuation_bound: self.tail_valuation_bound.min(other.tail_valuation_bound),
            converged: self.converged && other.converged,
        }
    }

    pub fn zero(p: u64) -> Self {
        Self::exact(PadicNumber::zero(p, EXACT))
    }
}

/// Sums `term(0) + term(1) + ...` until `guard` consecutive terms have
/// valuation at least the target precision and the caller's analytic tail
/// bound also reaches it. `tail_bound(k)` must bound the valuation of every
/// term with index greater than `k`.
///
/// The returned value is truncated to the tail bound, so its digits are
/// all trustworthy. Reaching `cap` first yields `Error::NonConvergence`
/// carrying the partial sum.
pub fn guarded_sum<T, B>(ctx: &QContext, mut term: T, tail_bound: B) -> Result<SeriesResult>
where
    T: FnMut(usize) -> Result<PadicNumber>,
    B: Fn(usize) -> i64,
{
    let target = ctx.target() as i64;
    let mut sum = PadicNumber::zero(ctx.p(), EXACT);
    let mut run = 0;
    for k in 0..=ctx.cap() {
        let t = term(k)?;
        sum = &sum + &t;
        if t.valuation() >= target {
            run += 1;
        } else {
            run = 0;
        }
        let tail = tail_bound(k).min(EXACT);
        if run >= ctx.guard() && tail >= target {
            return Ok(SeriesResult {
                value: sum.truncate(tail),
                last_index: k,
                tail_valuation_bound: tail,
                converged: true,
            });
        }
    }
    let tail = tail_bound(ctx.cap()).min(EXACT);
    Err(Error::NonConvergence(Box::new(SeriesResult {
        value: sum.truncate(tail),
        last_index: ctx.cap(),
        tail_valuation_bound: tail,
        converged: false,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::int;

    #[test]
    fn geometric_series_in_p() {
        // sum of 3^k = 1/(1 - 3) = -1/2
        let ctx = QContext::canonical(3, 8).unwrap();
        let res = guarded_sum(
            &ctx,
            |k| Ok(PadicNumber::from_i64(3i64.pow(k as u32), 3, 20)),
            |k| k as i64 + 1,
        )
        .unwrap();
        assert!(res.converged);
        assert!(res.tail_valuation_bound >= 8);
        let expected = PadicNumber::from_rational(&crate::numerics::rational::frac(-1, 2), 3, 20);
        assert!(res.value.agreement(&expected) >= 8);
        // terms 8, 9, 10 are the guard run
        assert_eq!(res.last_index, 10);
    }

    #[test]
    fn cap_reached_is_an_error() {
        let ctx = QContext::new(5, int(6), 4).unwrap().with_cap(5).unwrap();
        let err = guarded_sum(&ctx, |_| Ok(PadicNumber::one(5, 10)), |_| 0).unwrap_err();
        match err {
            Error::NonConvergence(partial) => {
                assert!(!partial.converged);
                assert_eq!(partial.last_index, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn guard_run_must_be_consecutive() {
        let ctx = QContext::canonical(3, 4).unwrap();
        // high, high, low, then high forever
        let res = guarded_sum(
            &ctx,
            |k| {
                Ok(if k == 2 {
                    PadicNumber::one(3, 10)
                } else {
                    PadicNumber::from_i64(81, 3, 10)
                })
            },
            |_| 10,
        )
        .unwrap();
        assert_eq!(res.last_index, 5);
    }
}
