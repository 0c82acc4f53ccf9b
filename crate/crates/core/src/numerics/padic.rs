//! Truncated p-adic numbers with explicit significant precision.
//!
//! A nonzero value is `unit * p^valuation` where the unit is known modulo
//! `p^precision`. A zero is only ever known up to some absolute precision:
//! it stands for "something in `p^valuation Z_p`", and its `valuation` field
//! holds that bound.

use super::rational::{int_valuation, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Absolute precision carried by exact zeros. Large enough to never limit a
/// computation, small enough that sums of a few of them cannot overflow.
pub const EXACT: i64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    valuation: i64,
    unit: BigInt,
    precision: u32,
}

fn p_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

impl PadicNumber {
    /// A zero known modulo `p^abs_precision`.
    pub fn zero(p: u64, abs_precision: i64) -> Self {
        Self {
            p,
            valuation: abs_precision.min(EXACT),
            unit: BigInt::zero(),
            precision: 0,
        }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_integer(&BigInt::one(), p, precision)
    }

    /// `value * p^shift`, known modulo `p^abs_precision`.
    fn normalize(p: u64, shift: i64, value: BigInt, abs_precision: i64) -> Self {
        let abs_precision = abs_precision.min(EXACT);
        let rel = abs_precision - shift;
        if rel <= 0 {
            return Self::zero(p, abs_precision);
        }
        let rel = rel as u32;
        let residue = value.mod_floor(&p_pow(p, rel));
        if residue.is_zero() {
            return Self::zero(p, abs_precision);
        }
        let e = int_valuation(&residue, p) as u32;
        Self {
            p,
            valuation: shift + e as i64,
            unit: residue / p_pow(p, e),
            precision: rel - e,
        }
    }

    /// Embeds an integer with `precision` significant digits.
    pub fn from_integer(n: &BigInt, p: u64, precision: u32) -> Self {
        if n.is_zero() {
            return Self::zero(p, EXACT);
        }
        let v = int_valuation(n, p);
        let unit = n / p_pow(p, v as u32);
        Self::normalize(p, v as i64, unit, v as i64 + precision as i64)
    }

    pub fn from_i64(n: i64, p: u64, precision: u32) -> Self {
        Self::from_integer(&BigInt::from(n), p, precision)
    }

    /// The image of `r` with valuation `v_p(r)` and a unit correct modulo
    /// `p^precision`; exact zero maps to the zero element.
    pub fn from_rational(r: &Rational, p: u64, precision: u32) -> Self {
        if r.is_zero() {
            return Self::zero(p, EXACT);
        }
        let vn = int_valuation(r.numer(), p);
        let vd = int_valuation(r.denom(), p);
        let num = r.numer() / p_pow(p, vn as u32);
        let den = r.denom() / p_pow(p, vd as u32);
        let modulus = p_pow(p, precision);
        let inv = den
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("denominator is a unit");
        let v = vn as i64 - vd as i64;
        Self::normalize(p, v, num * inv, v + precision as i64)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation of a nonzero value; for a zero, the absolute precision to
    /// which it is known to vanish.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Significant base-p digits of the unit (0 for zero).
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The value is known modulo `p^abs_precision()`.
    pub fn abs_precision(&self) -> i64 {
        if self.is_zero() {
            self.valuation
        } else {
            self.valuation + self.precision as i64
        }
    }

    /// Base-p digits of the unit, least significant first, exactly
    /// `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.p);
        let mut rest = self.unit.clone();
        (0..self.precision)
            .map(|_| {
                let (q, r) = rest.div_rem(&p);
                rest = q;
                r.to_u64().expect("digit fits in u64")
            })
            .collect()
    }

    /// Exact rational representative `unit * p^valuation` (0 for zero).
    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let pp = BigInt::from(self.p);
        let unit = Rational::from_integer(self.unit.clone());
        if self.valuation >= 0 {
            unit * Rational::from_integer(num_traits::pow(pp, self.valuation as usize))
        } else {
            unit / Rational::from_integer(num_traits::pow(pp, self.valuation.unsigned_abs() as usize))
        }
    }

    /// Integer representative in `[0, p^k)` of a value with nonnegative
    /// valuation, reduced modulo `p^k`.
    pub fn residue(&self, k: u32) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.valuation < 0 {
            return None;
        }
        let modulus = p_pow(self.p, k);
        Some((&self.unit * p_pow(self.p, self.valuation as u32)).mod_floor(&modulus))
    }

    /// Forgets every digit at or beyond `p^abs_precision`.
    pub fn truncate(&self, abs_precision: i64) -> Self {
        if abs_precision >= self.abs_precision() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, abs_precision);
        }
        Self::normalize(self.p, self.valuation, self.unit.clone(), abs_precision)
    }

    /// Number of leading p-adic digits on which `self` and `other` provably
    /// agree: `v_p(self - other)`, or the known precision of the difference
    /// when it vanishes at that precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        (self - other).valuation()
    }

    /// Equality at precision `k`: matching valuations and units agreeing
    /// modulo `p^min(k, both precisions)`, or both valuations at least `k`.
    pub fn eq_at_precision(&self, other: &Self, k: u32) -> bool {
        let k = k as i64;
        if self.valuation >= k && other.valuation >= k {
            return true;
        }
        if self.is_zero() || other.is_zero() || self.valuation != other.valuation {
            return false;
        }
        let digits = k.min(self.precision as i64).min(other.precision as i64) as u32;
        let modulus = p_pow(self.p, digits);
        self.unit.mod_floor(&modulus) == other.unit.mod_floor(&modulus)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = p_pow(self.p, self.precision);
        let unit = self.unit.modinv(&modulus).expect("unit is invertible");
        Ok(Self {
            p: self.p,
            valuation: -self.valuation,
            unit,
            precision: self.precision,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::from_integer(&BigInt::one(), self.p, self.precision.max(1));
        if self.is_zero() && e > 0 {
            return Ok(Self::zero(self.p, self.valuation.saturating_mul(e as i64)));
        }
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Multiplies by an exact rational without losing relative precision.
    pub fn mul_rational(&self, r: &Rational) -> Self {
        let c = Self::from_rational(r, self.p, self.precision.max(1));
        self * &c
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers for different primes");
    }
}

impl Add for &PadicNumber {
    type Output = PadicNumber;

    fn add(self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        let abs = self.abs_precision().min(other.abs_precision());
        let shift = self.valuation.min(other.valuation);
        if shift >= abs {
            return PadicNumber::zero(self.p, abs);
        }
        let lift = |x: &PadicNumber| -> BigInt {
            if x.is_zero() {
                BigInt::zero()
            } else {
                &x.unit * p_pow(x.p, (x.valuation - shift) as u32)
            }
        };
        PadicNumber::normalize(self.p, shift, lift(self) + lift(other), abs)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = p_pow(self.p, self.precision);
        PadicNumber {
            p: self.p,
            valuation: self.valuation,
            unit: (-&self.unit).mod_floor(&modulus),
            precision: self.precision,
        }
    }
}

impl Sub for &PadicNumber {
    type Output = PadicNumber;

    fn sub(self, other: &PadicNumber) -> PadicNumber {
        self + &(-other)
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;

    fn mul(self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => PadicNumber::zero(self.p, self.valuation.saturating_add(other.valuation)),
            (true, false) => PadicNumber::zero(self.p, self.valuation + other.valuation),
            (false, true) => PadicNumber::zero(self.p, self.valuation + other.valuation),
            (false, false) => {
                let precision = self.precision.min(other.precision);
                let modulus = p_pow(self.p, precision);
                PadicNumber {
                    p: self.p,
                    valuation: self.valuation + other.valuation,
                    unit: (&self.unit * &other.unit).mod_floor(&modulus),
                    precision,
                }
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, other: PadicNumber) -> PadicNumber {
                (&self).$method(&other)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, other: &PadicNumber) -> PadicNumber {
                (&self).$method(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        -&self
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.valuation);
        }
        write!(
            f,
            "{} * {}^{} + O({}^{})",
            self.unit,
            self.p,
            self.valuation,
            self.p,
            self.abs_precision()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PadicJson {
    valuation: i64,
    digits: Vec<u64>,
    precision: u32,
    p: u64,
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson {
            valuation: self.valuation,
            digits: self.digits(),
            precision: self.precision,
            p: self.p,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PadicJson::deserialize(deserializer)?;
        if raw.p < 2 {
            return Err(D::Error::custom("p must be a prime"));
        }
        if raw.digits.len() != raw.precision as usize {
            return Err(D::Error::custom("digit count must equal precision"));
        }
        if raw.digits.iter().any(|&d| d >= raw.p) {
            return Err(D::Error::custom("digit out of range"));
        }
        if raw.precision > 0 && raw.digits[0] == 0 {
            return Err(D::Error::custom("leading digit of a unit must be nonzero"));
        }
        let pp = BigInt::from(raw.p);
        let unit = raw
            .digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &pp + BigInt::from(d));
        Ok(Self {
            p: raw.p,
            valuation: raw.valuation,
            unit,
            precision: raw.precision,
        })
    }
}

impl PadicNumber {
    /// Signed representative of the unit in `(-p^prec/2, p^prec/2]`, handy for
    /// reading small values such as `-1`.
    pub fn signed_unit(&self) -> BigInt {
        let modulus = p_pow(self.p, self.precision);
        let half = &modulus / 2;
        if self.unit > half {
            &self.unit - modulus
        } else {
            self.unit.clone()
        }
    }
}
