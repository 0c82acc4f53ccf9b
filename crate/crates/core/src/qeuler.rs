//! q-Euler numbers and polynomials through their exact finite closed forms,
//! alternating power sums of q-integers, character-twisted q-Euler numbers,
//! and finite-level fermionic q-Volkenborn sums.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numerics::rational::{choose, int, pow, q_int, q_int_alt, sign, Rational};
use crate::numerics::{PadicNumber, QContext};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// The argument `a / F` of `E_{n, q^F}(a / F)`; `(q^F)^(a/F)` is read as
/// `q^a`, which keeps everything rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FractionalArg {
    a: u64,
    f: u64,
}

impl FractionalArg {
    pub fn new(a: u64, f: u64) -> Result<Self> {
        if f == 0 || f % 2 == 0 {
            return Err(Error::InvalidArgument(format!("F = {f} must be a positive odd integer")));
        }
        if a > f {
            return Err(Error::InvalidArgument(format!("need 0 <= a <= F, got a = {a}, F = {f}")));
        }
        Ok(Self { a, f })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn f(&self) -> u64 {
        self.f
    }
}

/// A value that is exact when the character is `{0, ±1}`-valued and p-adic
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LValue {
    Exact(#[serde(with = "crate::numerics::rational::serde_str")] Rational),
    Padic(PadicNumber),
}

impl LValue {
    pub fn to_padic(&self, p: u64, precision: u32) -> PadicNumber {
        match self {
            LValue::Exact(r) => PadicNumber::from_rational(r, p, precision),
            LValue::Padic(x) => x.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            LValue::Exact(r) => Some(r),
            LValue::Padic(_) => None,
        }
    }
}

fn check_q(q: &Rational, degree: u64) -> Result<()> {
    if q.is_one() {
        return Err(Error::ClassicalLimit);
    }
    if degree >= 1 && *q == int(-1) {
        return Err(Error::Pole { index: 1 });
    }
    Ok(())
}

fn euler_cache() -> &'static Mutex<HashMap<(Rational, u64), Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<(Rational, u64), Rational>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `E_{m,q} = 2 (1/(1-q))^m sum_i C(m,i) (-1)^i / (1 + q^i)`.
pub fn euler_number(m: u64, q: &Rational) -> Result<Rational> {
    check_q(q, m)?;
    let key = (q.clone(), m);
    if let Some(v) = euler_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let one = Rational::one();
    let sum = (0..=m).fold(Rational::zero(), |acc, i| {
        acc + Rational::from_integer(choose(m, i)) * sign(i as i64) / (&one + pow(q, i as i64))
    });
    let value = int(2) * pow(&(&one - q).recip(), m as i64) * sum;
    euler_cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}

/// `2 (1/(1-Q))^n sum_k C(n,k) (-y)^k / (1 + Q^k)` where `y = Q^x`.
fn euler_poly_core(n: u64, base: &Rational, y: &Rational) -> Rational {
    let one = Rational::one();
    let minus_y = -y.clone();
    let sum = (0..=n).fold(Rational::zero(), |acc, k| {
        acc + Rational::from_integer(choose(n, k)) * pow(&minus_y, k as i64)
            / (&one + pow(base, k as i64))
    });
    int(2) * pow(&(&one - base).recip(), n as i64) * sum
}

/// `E_{n,q}(x)` for an integer argument.
pub fn euler_poly(n: u64, x: u64, q: &Rational) -> Result<Rational> {
    check_q(q, n)?;
    Ok(euler_poly_core(n, q, &pow(q, x as i64)))
}

/// `E_{n,q^F}(a/F)`.
pub fn euler_poly_frac(n: u64, arg: FractionalArg, q: &Rational) -> Result<Rational> {
    let base = pow(q, arg.f as i64);
    check_q(&base, n)?;
    Ok(euler_poly_core(n, &base, &pow(q, arg.a as i64)))
}

/// `sum_j C(n,j) q^(jx) E_{j,q} [x]_q^(n-j)`, the moment expansion of
/// `E_{n,q}(x)`.
pub fn euler_poly_moments(n: u64, x: u64, q: &Rational) -> Result<Rational> {
    check_q(q, n)?;
    let qx = pow(q, x as i64);
    let bracket = q_int(x, q);
    (0..=n).try_fold(Rational::zero(), |acc, j| {
        Ok(acc
            + Rational::from_integer(choose(n, j))
                * pow(&qx, j as i64)
                * euler_number(j, q)?
                * pow(&bracket, (n - j) as i64))
    })
}

/// `2 sum_{l<n} (-1)^l [l]_q^m`, summed term by term.
pub fn alt_power_sum_brute(n: u64, m: u64, q: &Rational) -> Rational {
    let sum = (0..n).fold(Rational::zero(), |acc, l| {
        acc + sign(l as i64) * pow(&q_int(l, q), m as i64)
    });
    int(2) * sum
}

/// Closed form of `2 sum_{l<n} (-1)^l [l]_q^m` in terms of q-Euler numbers.
pub fn alt_power_sum_closed(n: u64, m: u64, q: &Rational) -> Result<Rational> {
    check_q(q, m)?;
    let s = sign(n as i64 + 1);
    let bracket = q_int(n, q);
    let head = (0..m).try_fold(Rational::zero(), |acc, l| {
        Ok(acc
            + Rational::from_integer(choose(m, l))
                * pow(q, (n * l) as i64)
                * euler_number(l, q)?
                * pow(&bracket, (m - l) as i64))
    })?;
    Ok(&s * head + (&s * pow(q, (n * m) as i64) + int(1)) * euler_number(m, q)?)
}

/// The same sum through the older form `(-1)^(n+1) q^n E_{m,q}(n) + E_{m,q}`.
/// The extra `q^n` makes it disagree with the brute-force sum; kept so the
/// discrepancy can be pinned as a regression.
pub fn alt_power_sum_via_poly(n: u64, m: u64, q: &Rational) -> Result<Rational> {
    Ok(sign(n as i64 + 1) * pow(q, n as i64) * euler_poly(m, n, q)? + euler_number(m, q)?)
}

/// Generalized q-Euler number `E_{n,chi,q}` with `q` taken from the context.
pub fn gen_euler_number(n: u64, chi: &DirichletCharacter, ctx: &QContext) -> Result<LValue> {
    gen_euler_number_base(n, chi, ctx.q(), ctx)
}

/// `E_{n,chi,q} = [f]_q^n sum_{a<f} chi(a) (-1)^a E_{n,q^f}(a/f)` for an
/// arbitrary base `q`; p-adic character values come from `ctx`.
pub fn gen_euler_number_base(
    n: u64,
    chi: &DirichletCharacter,
    q: &Rational,
    ctx: &QContext,
) -> Result<LValue> {
    if chi.is_real_valued() {
        return gen_euler_number_exact(n, chi, q).map(LValue::Exact);
    }
    let f = chi.conductor();
    let p = ctx.p();
    let mut sum = PadicNumber::zero(p, crate::numerics::EXACT);
    for a in 0..f {
        let chi_a = chi.eval(a as i64, ctx)?;
        if chi_a.is_zero() {
            continue;
        }
        let e = sign(a as i64) * euler_poly_frac(n, FractionalArg::new(a, f)?, q)?;
        sum = &sum + &(&chi_a * &PadicNumber::from_rational(&e, p, ctx.working()));
    }
    let scale = pow(&q_int(f, q), n as i64);
    Ok(LValue::Padic(sum.mul_rational(&scale)))
}

/// Exact `E_{n,chi,q}` for a `{0, ±1}`-valued character.
pub fn gen_euler_number_exact(n: u64, chi: &DirichletCharacter, q: &Rational) -> Result<Rational> {
    let f = chi.conductor();
    if f % 2 == 0 {
        return Err(Error::EvenConductor(f));
    }
    let mut sum = Rational::zero();
    for a in 0..f {
        let v = chi.exact_value(a as i64).ok_or_else(|| {
            Error::InvalidArgument(format!("character {chi} is not real-valued"))
        })?;
        if v != 0 {
            sum += int(v as i64) * sign(a as i64) * euler_poly_frac(n, FractionalArg::new(a, f)?, q)?;
        }
    }
    Ok(pow(&q_int(f, q), n as i64) * sum)
}

/// Level-`L` Riemann sum of the fermionic q-Volkenborn integral defining
/// `E_{m,q}`: `(2/[2]_q) (1/[p^L]_{-q}) sum_{x<p^L} q^{-x} [x]_q^m (-q)^x`.
pub fn volkenborn_approx(m: u64, level: u32, ctx: &QContext) -> Result<Rational> {
    if level == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let q = ctx.q();
    if q.is_zero() {
        return Err(Error::InvalidArgument("q = 0".into()));
    }
    let count = ctx.p().pow(level);
    let minus_q = -q.clone();
    let q_inv = q.recip();
    let mut sum = Rational::zero();
    let mut weight = Rational::one();
    for x in 0..count {
        sum += &weight * pow(&q_int(x, q), m as i64);
        weight *= &q_inv * &minus_q;
    }
    let normalizer = q_int(2, q) * q_int_alt(count, q);
    Ok(int(2) * sum / normalizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{frac, valuation};

    fn sample_q() -> Vec<Rational> {
        vec![int(2), frac(1, 2), int(4), int(6), frac(-2, 3)]
    }

    /// `E_m = -(sum_{l<m} C(m,l) q^l E_l) / (1 + q^m)`, the n = 1 case of the
    /// power-sum identity; independent of the closed form.
    fn euler_by_recurrence(m_max: u64, q: &Rational) -> Vec<Rational> {
        let mut out = vec![int(1)];
        for m in 1..=m_max {
            let s = (0..m).fold(Rational::zero(), |acc, l| {
                acc + Rational::from_integer(choose(m, l)) * pow(q, l as i64) * &out[l as usize]
            });
            out.push(-s / (int(1) + pow(q, m as i64)));
        }
        out
    }

    #[test]
    fn euler_number_examples() {
        assert_eq!(euler_number(0, &int(5)).unwrap(), int(1));
        assert_eq!(euler_number(1, &int(2)).unwrap(), frac(-1, 3));
        assert_eq!(euler_number(2, &int(2)).unwrap(), frac(1, 15));
        assert!(matches!(euler_number(1, &int(1)), Err(Error::ClassicalLimit)));
        assert!(matches!(euler_number(2, &int(-1)), Err(Error::Pole { .. })));
        // E_{2,q} = (q - 1) / ((1 + q)(1 + q^2))
        for q in sample_q() {
            let one = int(1);
            let want = (&q - &one) / ((&one + &q) * (&one + &q * &q));
            assert_eq!(euler_number(2, &q).unwrap(), want);
        }
    }

    #[test]
    fn closed_form_matches_recurrence() {
        for q in sample_q() {
            let rec = euler_by_recurrence(10, &q);
            for (m, want) in rec.iter().enumerate() {
                assert_eq!(&euler_number(m as u64, &q).unwrap(), want);
            }
        }
    }

    #[test]
    fn euler_poly_examples() {
        let q = int(2);
        assert_eq!(euler_poly(0, 3, &q).unwrap(), int(1));
        for n in 0..6 {
            assert_eq!(euler_poly(n, 0, &q).unwrap(), euler_number(n, &q).unwrap());
        }
        assert_eq!(euler_poly(1, 2, &q).unwrap(), frac(5, 3));
        assert_eq!(euler_poly_moments(1, 2, &q).unwrap(), frac(5, 3));
    }

    #[test]
    fn euler_poly_frac_examples() {
        let q = int(2);
        for n in 0..5 {
            let q3 = pow(&q, 3);
            let zero = FractionalArg::new(0, 3).unwrap();
            let whole = FractionalArg::new(3, 3).unwrap();
            assert_eq!(euler_poly_frac(n, zero, &q).unwrap(), euler_number(n, &q3).unwrap());
            assert_eq!(euler_poly_frac(n, whole, &q).unwrap(), euler_poly(n, 1, &q3).unwrap());
        }
        let arg = FractionalArg::new(1, 3).unwrap();
        assert_eq!(euler_poly_frac(0, arg, &q).unwrap(), int(1));
        assert_eq!(euler_poly_frac(1, arg, &q).unwrap(), frac(-5, 63));
        assert!(FractionalArg::new(1, 4).is_err());
        assert!(FractionalArg::new(4, 3).is_err());
    }

    #[test]
    fn fermionic_shift_relation() {
        // E_{n,q}(x) + E_{n,q}(x+1) = 2 [x]_q^n
        for q in sample_q() {
            for n in 0..6 {
                for x in 0..4 {
                    let lhs = euler_poly(n, x, &q).unwrap() + euler_poly(n, x + 1, &q).unwrap();
                    assert_eq!(lhs, int(2) * pow(&q_int(x, &q), n as i64));
                }
            }
        }
    }

    #[test]
    fn moments_agree_with_closed_form() {
        for q in sample_q() {
            for n in 0..=8 {
                for x in 0..=6 {
                    assert_eq!(
                        euler_poly(n, x, &q).unwrap(),
                        euler_poly_moments(n, x, &q).unwrap(),
                        "n={n} x={x} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn alt_power_sums() {
        let q = int(2);
        for m in 1..5 {
            assert_eq!(alt_power_sum_brute(1, m, &q), int(0));
        }
        assert_eq!(alt_power_sum_brute(2, 1, &q), int(-2));
        assert_eq!(alt_power_sum_brute(3, 1, &q), int(4));
        assert_eq!(alt_power_sum_closed(2, 1, &q).unwrap(), int(-2));
        assert_eq!(alt_power_sum_closed(1, 1, &q).unwrap(), int(0));
        assert_eq!(alt_power_sum_via_poly(2, 1, &q).unwrap(), int(-7));
        for q in sample_q() {
            for n in 1..=8 {
                for m in 1..=6 {
                    assert_eq!(alt_power_sum_brute(n, m, &q), alt_power_sum_closed(n, m, &q).unwrap());
                }
            }
        }
    }

    #[test]
    fn generalized_numbers() {
        let ctx = QContext::canonical(3, 8).unwrap();
        let q = int(2);
        let trivial = DirichletCharacter::trivial();
        for n in 0..5 {
            assert_eq!(gen_euler_number_exact(n, &trivial, &q).unwrap(), euler_number(n, &q).unwrap());
        }
        let chi3 = DirichletCharacter::quadratic(3).unwrap();
        assert_eq!(gen_euler_number_exact(0, &chi3, &q).unwrap(), int(-2));
        assert_eq!(
            gen_euler_number(0, &chi3, &ctx).unwrap(),
            LValue::Exact(int(-2))
        );

        // chi = w (p = 3) is the Legendre symbol mod 3, so the exact path applies
        let w = DirichletCharacter::teichmuller_power(3, 1).unwrap();
        let direct = gen_euler_number(1, &w, &ctx).unwrap();
        let q4 = int(4);
        let by_hand = q_int(3, &q4)
            * (euler_poly_frac(1, FractionalArg::new(1, 3).unwrap(), &q4).unwrap() * int(-1)
                + euler_poly_frac(1, FractionalArg::new(2, 3).unwrap(), &q4).unwrap() * int(-1));
        assert_eq!(direct, LValue::Exact(by_hand));
    }

    #[test]
    fn generalized_numbers_padic_characters() {
        let ctx = QContext::canonical(5, 8).unwrap();
        let w = DirichletCharacter::teichmuller_power(5, 1).unwrap();
        let got = gen_euler_number(2, &w, &ctx).unwrap();
        let LValue::Padic(got) = got else { panic!("expected a p-adic value") };
        let q = int(6);
        let mut want = PadicNumber::zero(5, crate::numerics::EXACT);
        for a in 1..5u64 {
            let wa = crate::numerics::teichmuller(&a.into(), 5, 18).unwrap();
            let e = sign(a as i64) * euler_poly_frac(2, FractionalArg::new(a, 5).unwrap(), &q).unwrap();
            want = &want + &(&wa * &PadicNumber::from_rational(&e, 5, 18));
        }
        want = want.mul_rational(&pow(&q_int(5, &q), 2));
        assert!(got.agreement(&want) >= 8);
    }

    #[test]
    fn volkenborn_examples() {
        let ctx = QContext::new(3, int(4), 8).unwrap();
        let a1 = volkenborn_approx(0, 1, &ctx).unwrap();
        assert_eq!(a1, frac(2, 65));
        assert_eq!(valuation(&(&a1 - int(1)), 3), Some(2));
        let a2 = volkenborn_approx(0, 2, &ctx).unwrap();
        assert_eq!(valuation(&(&a2 - int(1)), 3), Some(3));
        for (p, q) in [(3u64, 4i64), (5, 6)] {
            let ctx = QContext::new(p, int(q), 8).unwrap();
            for m in 0..=3 {
                let e = euler_number(m, &int(q)).unwrap();
                let mut last = i64::MIN;
                for level in 1..=4 {
                    let v = valuation(&(volkenborn_approx(m, level, &ctx).unwrap() - &e), p).unwrap();
                    assert!(v >= level as i64, "p={p} m={m} L={level} v={v}");
                    assert!(v >= last);
                    last = v;
                }
            }
        }
    }
}
