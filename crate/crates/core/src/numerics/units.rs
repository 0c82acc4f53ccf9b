//! Teichmüller lifts, principal unit parts `<a> = [a]_q / w(a)`, and
//! exponentiation of principal units by p-adic integers.

use super::context::QContext;
use super::padic::{PadicNumber, EXACT};
use super::rational::{binom_int, q_int};
use super::series::{guarded_sum, SeriesResult};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exponent `s` of a p-adic power or binomial: an exact integer, or a
/// p-adic integer known to finite precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Integer(BigInt),
    Padic(PadicNumber),
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::Integer(BigInt::from(n))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Integer(n) => write!(f, "{n}"),
            Exponent::Padic(x) => write!(f, "{x}"),
        }
    }
}

impl Exponent {
    pub fn padic(s: PadicNumber) -> Result<Self> {
        if !s.is_zero() && s.valuation() < 0 {
            return Err(Error::InvalidArgument(format!(
                "exponent {s} is not a p-adic integer"
            )));
        }
        Ok(Exponent::Padic(s))
    }

    pub fn negate(&self) -> Self {
        match self {
            Exponent::Integer(n) => Exponent::Integer(-n),
            Exponent::Padic(x) => Exponent::Padic(-x),
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Exponent::Integer(n) => Some(n),
            Exponent::Padic(_) => None,
        }
    }

    /// `Some(m)` when the exponent is a nonnegative integer `m`, in which
    /// case `C(s, k)` vanishes for every `k > m`.
    pub fn nonneg_integer(&self) -> Option<u64> {
        match self {
            Exponent::Integer(n) if !n.is_negative() => n.to_u64(),
            _ => None,
        }
    }

    /// `C(s, k)` in the p-adic integers.
    pub fn binom(&self, k: u64, ctx: &QContext) -> PadicNumber {
        match self {
            Exponent::Integer(n) => {
                PadicNumber::from_integer(&binom_int(n, k), ctx.p(), ctx.working())
            }
            Exponent::Padic(s) => binom_padic(s, k, ctx),
        }
    }

    pub fn to_padic(&self, ctx: &QContext) -> PadicNumber {
        match self {
            Exponent::Integer(n) => PadicNumber::from_integer(n, ctx.p(), ctx.working()),
            Exponent::Padic(x) => x.clone(),
        }
    }
}

fn modulus(p: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), n as usize)
}

/// The Teichmüller lift `w(a)`: the unique `(p-1)`-th root of unity
/// congruent to `a` mod `p`, computed as `a^(p^(n-1)) mod p^n`.
pub fn teichmuller(a: &BigInt, p: u64, n: u32) -> Result<PadicNumber> {
    let pp = BigInt::from(p);
    if a.mod_floor(&pp).is_zero() {
        return Err(Error::NonUnit(a.to_string()));
    }
    let m = modulus(p, n);
    let exp = modulus(p, n.saturating_sub(1));
    let w = a.mod_floor(&m).modpow(&exp, &m);
    Ok(PadicNumber::from_integer(&w, p, n))
}

/// `<a> = [a]_q / w(a)`, a principal unit (congruent to 1 mod p).
pub fn angle_bracket(a: u64, ctx: &QContext) -> Result<PadicNumber> {
    let w = teichmuller(&BigInt::from(a), ctx.p(), ctx.working())?;
    let qa = PadicNumber::from_rational(&q_int(a, ctx.q()), ctx.p(), ctx.working());
    qa.div(&w)
}

/// `C(s, k) = s (s-1) ... (s-k+1) / k!` for a p-adic integer `s`. The
/// precision lost to cancellation in the factors and to `v_p(k!)` shows up
/// in the result's precision.
pub fn binom_padic(s: &PadicNumber, k: u64, ctx: &QContext) -> PadicNumber {
    let p = ctx.p();
    let slack = ctx.working() + 64;
    let mut num = PadicNumber::one(p, slack);
    let mut fact = BigInt::one();
    for i in 0..k {
        let shifted = s - &PadicNumber::from_i64(i as i64, p, slack);
        num = &num * &shifted;
        fact *= BigInt::from(i + 1);
    }
    let fact = PadicNumber::from_integer(&fact, p, slack);
    num.div(&fact).expect("k! is nonzero")
}

/// `u^s` for a principal unit `u` and p-adic integer `s`, as the guarded
/// binomial series `sum_k C(s, k) (u - 1)^k`.
pub fn padic_pow(u: &PadicNumber, s: &Exponent, ctx: &QContext) -> Result<SeriesResult> {
    let p = ctx.p();
    let one = PadicNumber::one(p, ctx.working());
    let d = u - &one;
    if u.is_zero() || u.valuation() != 0 || d.valuation() < 1 {
        return Err(Error::Divergent);
    }
    let dv = d.valuation();
    let finite = s.nonneg_integer();
    let mut power = PadicNumber::one(p, ctx.working());
    guarded_sum(
        ctx,
        |k| {
            if k > 0 {
                power = &power * &d;
            }
            Ok(&s.binom(k as u64, ctx) * &power)
        },
        |k| match finite {
            Some(m) if k as u64 >= m => EXACT,
            _ => (k as i64 + 1).saturating_mul(dv),
        },
    )
}
