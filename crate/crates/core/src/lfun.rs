//! Partial q-zeta values and Dirichlet q-l-values at negative integers, and
//! their p-adic interpolations `H_{p,q}`, `l_{p,q}` together with the
//! companion series `T` and `K`.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numerics::rational::{int, pow, q_int, sign, valuation, Rational};
use crate::numerics::{angle_bracket, padic_pow, Exponent, PadicNumber, QContext, SeriesResult, EXACT};
use crate::qeuler::{euler_number, euler_poly_frac, gen_euler_number_base, FractionalArg, LValue};
use num_traits::{One, Zero};

/// The residue class `a mod F` of a partial zeta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartialZetaParams {
    a: u64,
    f: u64,
}

impl PartialZetaParams {
    pub fn new(a: u64, f: u64) -> Result<Self> {
        if f % 2 == 0 {
            return Err(Error::InvalidArgument(format!("F = {f} must be odd")));
        }
        if a == 0 || a >= f {
            return Err(Error::InvalidArgument(format!("need 0 < a < F, got a = {a}, F = {f}")));
        }
        Ok(Self { a, f })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    fn check_padic(&self, p: u64) -> Result<()> {
        if self.f % p != 0 {
            return Err(Error::InvalidArgument(format!("F = {} is not a multiple of p = {p}", self.f)));
        }
        if self.a % p == 0 {
            return Err(Error::NonUnit(self.a.to_string()));
        }
        Ok(())
    }
}

/// `H_q(-n, a : F) = (-1)^a ([F]_q^n / 2) E_{n,q^F}(a/F)`; `a = F` is
/// allowed here so that full residue systems `1..=F` can be summed.
fn partial_zeta_raw(n: u64, a: u64, f: u64, q: &Rational) -> Result<Rational> {
    let e = euler_poly_frac(n, FractionalArg::new(a, f)?, q)?;
    Ok(sign(a as i64) * pow(&q_int(f, q), n as i64) / int(2) * e)
}

/// Exact value of the partial q-zeta function at `-n`.
pub fn partial_zeta_neg(n: u64, prm: PartialZetaParams, q: &Rational) -> Result<Rational> {
    partial_zeta_raw(n, prm.a, prm.f, q)
}

/// `l_q(-k, chi) = E_{k,chi,q}`.
pub fn lq_neg(k: u64, chi: &DirichletCharacter, q: &Rational, ctx: &QContext) -> Result<LValue> {
    gen_euler_number_base(k, chi, q, ctx)
}

/// `l_q(-k, chi)` through the partial-zeta decomposition
/// `2 sum_{a=1}^{f} chi(a) H_q(-k, a : f)`. Agrees with [`lq_neg`] for
/// `k >= 1`; at `k = 0` the trivial character gives `-1` instead of `1`.
pub fn lq_neg_partial(k: u64, chi: &DirichletCharacter, q: &Rational, ctx: &QContext) -> Result<LValue> {
    let f = chi.conductor();
    if f % 2 == 0 {
        return Err(Error::EvenConductor(f));
    }
    if chi.is_real_valued() {
        let mut sum = Rational::zero();
        for a in 1..=f {
            let v = chi.exact_value(a as i64).unwrap_or(0);
            if v != 0 {
                sum += int(2 * v as i64) * partial_zeta_raw(k, a, f, q)?;
            }
        }
        return Ok(LValue::Exact(sum));
    }
    let p = ctx.p();
    let mut sum = PadicNumber::zero(p, EXACT);
    for a in 1..=f {
        let c = chi.eval(a as i64, ctx)?;
        if !c.is_zero() {
            let h = PadicNumber::from_rational(&(int(2) * partial_zeta_raw(k, a, f, q)?), p, ctx.working());
            sum = &sum + &(&c * &h);
        }
    }
    Ok(LValue::Padic(sum))
}

/// `sum_j C(-s, j) X^j w_j` with `X = q^a [F]_q / [a]_q`, whose valuation is
/// `v_p(F)`. `weight(j)` must be p-integral. The series is finite when `-s`
/// is a nonnegative integer.
fn x_series<W>(s: &Exponent, prm: PartialZetaParams, ctx: &QContext, mut weight: W) -> Result<SeriesResult>
where
    W: FnMut(u64) -> Result<Rational>,
{
    let p = ctx.p();
    let q = ctx.q();
    let minus_s = s.negate();
    let x = pow(q, prm.a as i64) * q_int(prm.f, q) / q_int(prm.a, q);
    let vx = valuation(&x, p).unwrap_or(EXACT).max(1);
    let finite = minus_s.nonneg_integer();
    let mut x_power = Rational::one();
    crate::numerics::guarded_sum(
        ctx,
        |j| {
            if j > 0 {
                x_power *= &x;
            }
            let j = j as u64;
            if finite.is_some_and(|m| j > m) {
                return Ok(PadicNumber::zero(p, EXACT));
            }
            let c = minus_s.binom(j, ctx);
            let w = PadicNumber::from_rational(&(&x_power * weight(j)?), p, ctx.working());
            Ok(&c * &w)
        },
        |k| match finite {
            Some(m) if k as u64 >= m => EXACT,
            _ => (k as i64 + 1).saturating_mul(vx),
        },
    )
}

/// `<a>^(-s)` together with the sign/scale prefactor `(-1)^a * factor`.
fn unit_prefactor(s: &Exponent, prm: PartialZetaParams, factor: &Rational, ctx: &QContext) -> Result<SeriesResult> {
    let u = angle_bracket(prm.a, ctx)?;
    let power = padic_pow(&u, &s.negate(), ctx)?;
    let c = sign(prm.a as i64) * factor;
    Ok(power.scale(&PadicNumber::from_rational(&c, ctx.p(), ctx.working())))
}

fn check_padic_context(prm: PartialZetaParams, ctx: &QContext) -> Result<()> {
    prm.check_padic(ctx.p())?;
    ctx.require_q_ne_one()
}

/// `H_{p,q}(s, a : F) = ((-1)^a / 2) <a>^(-s) sum_j C(-s, j) X^j E_{j,q^F}`.
pub fn h_pq(s: &Exponent, prm: PartialZetaParams, ctx: &QContext) -> Result<SeriesResult> {
    check_padic_context(prm, ctx)?;
    let big_q = pow(ctx.q(), prm.f as i64);
    let series = x_series(s, prm, ctx, |j| euler_number(j, &big_q))?;
    Ok(unit_prefactor(s, prm, &Rational::new(1.into(), 2.into()), ctx)?.times(&series))
}

/// `T_{n,q}(s, a : F) = (-1)^a <a>^(-s) sum_k C(-s, k) X^k ((-1)^n Q^(nk) - 1) E_{k,Q}`
/// with `Q = q^F`.
pub fn t_partial(n: u64, s: &Exponent, prm: PartialZetaParams, ctx: &QContext) -> Result<SeriesResult> {
    check_padic_context(prm, ctx)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let big_q = pow(ctx.q(), prm.f as i64);
    let sn = sign(n as i64);
    let series = x_series(s, prm, ctx, |k| {
        Ok((&sn * pow(&big_q, (n * k) as i64) - int(1)) * euler_number(k, &big_q)?)
    })?;
    Ok(unit_prefactor(s, prm, &int(1), ctx)?.times(&series))
}

/// `K_{p,q}(s, a : F) = ((-1)^a / 2) <a>^(-s) sum_l C(-s, l) X^l E_{l,Q}
/// sum_{j=1}^{l} C(l, j) [nF]_q^j (q - 1)^j`.
pub fn k_partial(n: u64, s: &Exponent, prm: PartialZetaParams, ctx: &QContext) -> Result<SeriesResult> {
    check_padic_context(prm, ctx)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let q = ctx.q();
    let big_q = pow(q, prm.f as i64);
    let step = q_int(n * prm.f, q) * (q - int(1));
    let series = x_series(s, prm, ctx, |l| {
        let inner = (1..=l).fold(Rational::zero(), |acc, j| {
            acc + Rational::from_integer(crate::numerics::rational::choose(l, j)) * pow(&step, j as i64)
        });
        Ok(inner * euler_number(l, &big_q)?)
    })?;
    Ok(unit_prefactor(s, prm, &Rational::new(1.into(), 2.into()), ctx)?.times(&series))
}

fn check_modulus(chi: &DirichletCharacter, f: u64, p: u64) -> Result<()> {
    if f % 2 == 0 || f % p != 0 {
        return Err(Error::InvalidArgument(format!("F = {f} must be an odd multiple of p = {p}")));
    }
    let conductor = chi.conductor();
    if f % conductor != 0 {
        return Err(Error::ConductorMismatch { conductor, modulus: f });
    }
    Ok(())
}

/// `2 sum_{a <= F, (a,p) = 1} chi(a) g(a)`.
fn character_sum<G>(chi: &DirichletCharacter, f: u64, ctx: &QContext, mut g: G) -> Result<SeriesResult>
where
    G: FnMut(PartialZetaParams) -> Result<SeriesResult>,
{
    let p = ctx.p();
    let mut total = SeriesResult::zero(p);
    for a in (1..f).filter(|a| a % p != 0) {
        let c = chi.eval(a as i64, ctx)?;
        if c.is_zero() {
            continue;
        }
        let two_c = c.mul_rational(&int(2));
        total = total.plus(&g(PartialZetaParams::new(a, f)?)?.scale(&two_c));
    }
    Ok(total)
}

/// `l_{p,q}(s, chi) = 2 sum_{a=1, (a,p)=1}^{F} chi(a) H_{p,q}(s, a : F)`.
pub fn l_pq(s: &Exponent, chi: &DirichletCharacter, ctx: &QContext, f: u64) -> Result<SeriesResult> {
    check_modulus(chi, f, ctx.p())?;
    character_sum(chi, f, ctx, |prm| h_pq(s, prm, ctx))
}

/// Closed form of `l_{p,q}(-n, chi)`: with `psi = chi w^(-n)`,
/// `E_{n,psi,q} - [p]_q^n psi(p) E_{n,psi,q^p}`.
pub fn l_pq_neg_closed_form(n: u64, chi: &DirichletCharacter, ctx: &QContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let q = ctx.q();
    let psi = chi.twist(-(n as i64), p)?;
    let working = ctx.working();
    let head = gen_euler_number_base(n, &psi, q, ctx)?.to_padic(p, working);
    let psi_p = psi.eval(p as i64, ctx)?;
    if psi_p.is_zero() {
        return Ok(head);
    }
    let qp = pow(q, p as i64);
    let tail = gen_euler_number_base(n, &psi, &qp, ctx)?.to_padic(p, working);
    let scale = pow(&q_int(p, q), n as i64);
    Ok(&head - &(&psi_p * &tail.mul_rational(&scale)))
}

/// `T_{p,q}(s, chi) = 2 sum_{a=1}^{p-1} chi(a) T_{n,q}(s, a : p)`.
pub fn t_full(n: u64, s: &Exponent, chi: &DirichletCharacter, ctx: &QContext) -> Result<SeriesResult> {
    check_modulus(chi, ctx.p(), ctx.p())?;
    character_sum(chi, ctx.p(), ctx, |prm| t_partial(n, s, prm, ctx))
}

/// `K_{p,q}(s, chi) = 2 sum_{a=1}^{p-1} chi(a) K_{p,q}(s, a : p)`.
pub fn k_full(n: u64, s: &Exponent, chi: &DirichletCharacter, ctx: &QContext) -> Result<SeriesResult> {
    check_modulus(chi, ctx.p(), ctx.p())?;
    character_sum(chi, ctx.p(), ctx, |prm| k_partial(n, s, prm, ctx))
}

/// Lowest power of `p` not yet resolved in a series result, capped at the
/// digits carried by its value.
pub fn known_precision(r: &SeriesResult) -> i64 {
    r.tail_valuation_bound.min(r.value.abs_precision())
}

/// Digits expected to survive the binomial coefficients `C(n, j)`, `j <= n`.
pub fn interpolation_precision(n: u64, p: u64, target: u32) -> i64 {
    target as i64 - crate::numerics::rational::factorial_valuation(n, p) as i64 - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::frac;
    use crate::numerics::{reduce, teichmuller};
    use num_bigint::BigInt;

    fn prm(a: u64, f: u64) -> PartialZetaParams {
        PartialZetaParams::new(a, f).unwrap()
    }

    #[test]
    fn partial_zeta_examples() {
        assert_eq!(partial_zeta_neg(0, prm(1, 3), &int(2)).unwrap(), frac(-1, 2));
        assert_eq!(partial_zeta_neg(0, prm(2, 3), &int(2)).unwrap(), frac(1, 2));
        assert_eq!(euler_poly_frac(1, FractionalArg::new(1, 3).unwrap(), &int(2)).unwrap(), frac(-5, 63));
        assert_eq!(partial_zeta_neg(1, prm(1, 3), &int(2)).unwrap(), frac(5, 18));
        assert!(PartialZetaParams::new(0, 3).is_err());
        assert!(PartialZetaParams::new(3, 3).is_err());
        assert!(PartialZetaParams::new(1, 4).is_err());
    }

    #[test]
    fn partial_zeta_is_an_abel_sum_at_small_q() {
        // For q = 1/2 the defining series sum_{m = a mod F} (-1)^m [m]_q^n
        // converges after Abel summation in m; check n = 1 against 600 terms.
        let q = frac(1, 2);
        let (a, f, n) = (1u64, 3u64, 1u64);
        let exact = partial_zeta_neg(n, prm(a, f), &q).unwrap();
        let qf = 0.5f64;
        let mut sum = 0.0;
        let t = 0.999f64;
        for l in 0..20000u64 {
            let m = a + f * l;
            let bracket = (1.0 - qf.powi(m as i32)) / (1.0 - qf);
            let s = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += s * bracket.powi(n as i32) * t.powi(l as i32);
        }
        let exact_f: f64 = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
        assert!((sum - exact_f).abs() < 1e-2, "{sum} vs {exact_f}");
    }

    #[test]
    fn lq_two_paths() {
        let ctx = QContext::canonical(3, 8).unwrap();
        let triv = DirichletCharacter::trivial();
        assert_eq!(lq_neg(1, &triv, &int(2), &ctx).unwrap(), LValue::Exact(frac(-1, 3)));
        let chi3 = DirichletCharacter::quadratic(3).unwrap();
        assert_eq!(lq_neg(0, &chi3, &int(2), &ctx).unwrap(), LValue::Exact(int(-2)));
        assert_eq!(lq_neg_partial(0, &triv, &int(2), &ctx).unwrap(), LValue::Exact(int(-1)));
        let chars = [triv, chi3, DirichletCharacter::quadratic(5).unwrap()];
        for q in [int(2), frac(1, 2), int(4), int(6), frac(-2, 3)] {
            for chi in &chars {
                for k in 1..=4 {
                    assert_eq!(
                        lq_neg(k, chi, &q, &ctx).unwrap(),
                        lq_neg_partial(k, chi, &q, &ctx).unwrap(),
                        "k={k} chi={chi} q={q}"
                    );
                }
            }
        }
        let ctx5 = QContext::canonical(5, 8).unwrap();
        let w = DirichletCharacter::teichmuller_power(5, 1).unwrap();
        for k in 1..=3 {
            let a = lq_neg(k, &w, &int(6), &ctx5).unwrap().to_padic(5, 18);
            let b = lq_neg_partial(k, &w, &int(6), &ctx5).unwrap().to_padic(5, 18);
            assert!(a.agreement(&b) >= 8);
        }
    }

    #[test]
    fn h_pq_examples() {
        let ctx = QContext::canonical(3, 8).unwrap();
        let zero = Exponent::from(0);
        for a in [1u64, 2] {
            let h = h_pq(&zero, prm(a, 3), &ctx).unwrap();
            assert!(h.value.agreement(&reduce(&(sign(a as i64) / int(2)), 3, 18)) >= 8);
        }
        let h = h_pq(&Exponent::from(-1), prm(1, 3), &ctx).unwrap();
        let want = reduce(&partial_zeta_neg(1, prm(1, 3), &int(4)).unwrap(), 3, 18);
        assert!(h.value.agreement(&want) >= 8);
        assert!(matches!(h_pq(&zero, prm(3, 9), &ctx), Err(Error::NonUnit(_))));
        assert!(h_pq(&zero, prm(1, 5), &ctx).is_err());
    }

    #[test]
    fn h_pq_interpolates_partial_zeta() {
        for p in [3u64, 5] {
            let ctx = QContext::canonical(p, 8).unwrap();
            for a in 1..p {
                for n in 0..=5u64 {
                    let h = h_pq(&Exponent::from(-(n as i64)), prm(a, p), &ctx).unwrap();
                    let w = teichmuller(&BigInt::from(a), p, 18).unwrap().pow(-(n as i64)).unwrap();
                    let exact = reduce(&partial_zeta_neg(n, prm(a, p), ctx.q()).unwrap(), p, 18);
                    let want = &w * &exact;
                    assert!(h.value.agreement(&want) >= interpolation_precision(n, p, 8));
                }
            }
            // F = 3p exercises non-prime moduli
            let f = 3 * p;
            for a in (1..f).filter(|a| a % p != 0).take(4) {
                let h = h_pq(&Exponent::from(-2), prm(a, f), &ctx).unwrap();
                let w = teichmuller(&BigInt::from(a), p, 18).unwrap().pow(-2).unwrap();
                let exact = reduce(&partial_zeta_neg(2, prm(a, f), ctx.q()).unwrap(), p, 18);
                assert!(h.value.agreement(&(&w * &exact)) >= 6);
            }
        }
    }

    #[test]
    fn l_pq_examples() {
        let ctx = QContext::canonical(3, 8).unwrap();
        let triv = DirichletCharacter::trivial();
        let l = l_pq(&Exponent::from(0), &triv, &ctx, 3).unwrap();
        assert!(l.value.valuation() >= 8);
        let w = DirichletCharacter::teichmuller_power(3, 1).unwrap();
        let l = l_pq(&Exponent::from(-1), &w, &ctx, 3).unwrap();
        assert!(l.value.agreement(&reduce(&frac(8, 65), 3, 18)) >= 6);
        assert_eq!(euler_number(1, &int(4)).unwrap(), frac(-1, 5));
        assert_eq!(euler_number(1, &int(64)).unwrap(), frac(-1, 65));
        assert_eq!(q_int(3, &int(4)), int(21));
        assert!(matches!(
            l_pq(&Exponent::from(0), &DirichletCharacter::quadratic(5).unwrap(), &ctx, 3),
            Err(Error::ConductorMismatch { .. })
        ));
        assert!(l_pq(&Exponent::from(0), &triv, &ctx, 6).is_err());
    }

    #[test]
    fn l_pq_interpolates_twisted_numbers() {
        for p in [3u64, 5] {
            let ctx = QContext::canonical(p, 8).unwrap();
            for t in 0..3i64 {
                let chi = DirichletCharacter::teichmuller_power(p, t).unwrap();
                for n in 0..=4u64 {
                    let l = l_pq(&Exponent::from(-(n as i64)), &chi, &ctx, p).unwrap();
                    let want = l_pq_neg_closed_form(n, &chi, &ctx).unwrap();
                    assert!(l.value.agreement(&want) >= interpolation_precision(n, p, 8), "p={p} t={t} n={n}");
                }
            }
            // chi = w^n: the twist is trivial
            for n in 1..=4u64 {
                let chi = DirichletCharacter::teichmuller_power(p, n as i64).unwrap();
                let q = ctx.q();
                let plain = euler_number(n, q).unwrap()
                    - pow(&q_int(p, q), n as i64) * euler_number(n, &pow(q, p as i64)).unwrap();
                let l = l_pq(&Exponent::from(-(n as i64)), &chi, &ctx, p).unwrap();
                assert!(l.value.agreement(&reduce(&plain, p, 18)) >= interpolation_precision(n, p, 8));
            }
        }
    }

    #[test]
    fn t_and_k_examples() {
        let ctx = QContext::canonical(3, 8).unwrap();
        let zero = Exponent::from(0);
        for a in [1u64, 2] {
            assert!(t_partial(2, &zero, prm(a, 3), &ctx).unwrap().value.valuation() >= 8);
            let t = t_partial(1, &zero, prm(a, 3), &ctx).unwrap();
            assert!(t.value.agreement(&reduce(&(int(-2) * sign(a as i64)), 3, 18)) >= 8);
            assert!(k_partial(1, &zero, prm(a, 3), &ctx).unwrap().value.valuation() >= 8);
        }
        let triv = DirichletCharacter::trivial();
        assert!(t_full(1, &zero, &triv, &ctx).unwrap().value.valuation() >= 8);
        assert!(t_full(2, &zero, &triv, &ctx).unwrap().value.valuation() >= 8);
        assert!(k_full(3, &zero, &triv, &ctx).unwrap().value.valuation() >= 8);
    }

    #[test]
    fn k_at_minus_one_is_a_single_term() {
        // -s = 1: the l = 0 term has an empty inner sum, leaving only l = 1
        let ctx = QContext::canonical(5, 8).unwrap();
        let q = ctx.q().clone();
        for (n, a) in [(1u64, 2u64), (2, 3)] {
            let got = k_partial(n, &Exponent::from(-1), prm(a, 5), &ctx).unwrap();
            let big_q = pow(&q, 5);
            let x = pow(&q, a as i64) * q_int(5, &q) / q_int(a, &q);
            let term = sign(a as i64) / int(2)
                * (&x * euler_number(1, &big_q).unwrap() * q_int(5 * n, &q) * (&q - int(1)));
            let want = &angle_bracket(a, &ctx).unwrap() * &reduce(&term, 5, 18);
            assert!(got.value.agreement(&want) >= 8);
        }
    }

    #[test]
    fn k_inner_sum_telescopes() {
        // sum_{j=1}^{l} C(l,j) ([nF]_q (q-1))^j = q^(nFl) - 1
        let q = int(4);
        for (n, f) in [(1u64, 3u64), (2, 3), (1, 9)] {
            let step = q_int(n * f, &q) * (&q - int(1));
            for l in 0..6u64 {
                let inner = (1..=l).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(crate::numerics::rational::choose(l, j)) * pow(&step, j as i64)
                });
                assert_eq!(inner, pow(&q, (n * f * l) as i64) - int(1));
            }
        }
    }

    #[test]
    fn near_classical_q_suppresses_t_and_k() {
        for p in [3u64, 5] {
            let q = int(1) + pow(&int(p as i64), 6);
            let ctx = QContext::new(p, q, 8).unwrap();
            for s in [1i64, 2, 3] {
                for a in 1..p {
                    let t = t_partial(2, &Exponent::from(s), prm(a, p), &ctx).unwrap();
                    assert!(t.value.valuation() >= 5, "T p={p} s={s} a={a}");
                    let k = k_partial(1, &Exponent::from(s), prm(a, p), &ctx).unwrap();
                    assert!(k.value.valuation() >= 5, "K p={p} s={s} a={a}");
                }
            }
        }
    }

    #[test]
    fn doubling_cap_and_guard_is_stable() {
        for p in [3u64, 5] {
            let ctx = QContext::canonical(p, 8).unwrap();
            let wide = ctx.clone().with_cap(2 * ctx.cap()).unwrap().with_guard(6).unwrap();
            let chi = DirichletCharacter::teichmuller_power(p, 1).unwrap();
            for s in [1i64, 2, 5] {
                let a = l_pq(&Exponent::from(s), &chi, &ctx, p).unwrap();
                let b = l_pq(&Exponent::from(s), &chi, &wide, p).unwrap();
                assert!(a.converged && b.converged);
                assert!(a.value.agreement(&b.value) >= 8);
            }
        }
    }

    #[test]
    fn padic_exponent_matches_integer_exponent() {
        let ctx = QContext::canonical(5, 8).unwrap();
        let s_int = Exponent::from(3);
        let s_pad = Exponent::padic(PadicNumber::from_i64(3, 5, 18)).unwrap();
        let a = h_pq(&s_int, prm(2, 5), &ctx).unwrap();
        let b = h_pq(&s_pad, prm(2, 5), &ctx).unwrap();
        assert!(a.value.agreement(&b.value) >= 8);
    }
}
