//! Exact rational helpers: q-integers, generalized binomials, p-adic valuations
//! and the `num/den` text form used on the command line.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision exact fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `q^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), e.unsigned_abs() as usize)
    }
}

/// `(-1)^e` as a rational.
pub fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// The q-integer `[x]_q = 1 + q + ... + q^(x-1)`.
pub fn q_int(x: u64, q: &Rational) -> Rational {
    if q.is_one() {
        return Rational::from_integer(BigInt::from(x));
    }
    let one = Rational::one();
    (&one - pow(q, x as i64)) / (&one - q)
}

/// `[x]_{-q} = 1 - q + q^2 - ... + (-q)^(x-1)`.
pub fn q_int_alt(x: u64, q: &Rational) -> Rational {
    let minus_q = -q.clone();
    if minus_q.is_one() {
        return Rational::from_integer(BigInt::from(x));
    }
    let one = Rational::one();
    (&one - pow(&minus_q, x as i64)) / (&one + q)
}

/// Generalized binomial coefficient `t (t-1) ... (t-k+1) / k!`.
pub fn binom_rat(t: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= t - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// Generalized binomial coefficient for an integer top argument, which is
/// always an integer.
pub fn binom_int(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Ordinary binomial coefficient `C(n, k)` for `0 <= k <= n`, zero otherwise.
pub fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    binom_int(&BigInt::from(n), k.min(n - k))
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = m.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        m = quot;
        v += 1;
    }
}

/// `v_p(r)`, or `None` for zero.
pub fn valuation(r: &Rational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64)
}

/// `v_p(n!)` by Legendre's formula.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut m = n / p;
    while m > 0 {
        v += m;
        m /= p;
    }
    v
}

/// Parses `A`, `-A` or `A/B` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Lowest-terms text form: `num/den`, or just `num` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Serde adapter writing a rational as the string `"num/den"` or `"n"`.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}
