//! The expansion of `2 sum_{j <= np, (j,p) = 1} (-1)^j / [j]_q^r` as a
//! power series in `[pn]_q` with `l_{p,q}`, `K` and `T` coefficients.
//!
//! Two right sides are computed. The *stated* one keeps a `k = 0` term,
//! omits the weight `q^(ak)` inside the character sums and subtracts the
//! full `T_{p,q}(r, w^-r)`. The *rederived* one follows the derivation step
//! by step:
//!
//! `-(-1)^n sum_{k>=1} C(-r,k) [pn]_q^k 2 sum_a q^(ak) w^(-r-k)(a) (H + K)(r+k, a : p)
//!  - T_{p,q}(r, w^-r) / 2`.
//!
//! Each intermediate identity is checked on its own so a disagreement can be
//! localized.

use super::{residual, residual_rational, run_parallel, INFINITE_VALUATION};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfun::{h_pq, k_full, k_partial, l_pq, t_full, t_partial, PartialZetaParams};
use crate::numerics::rational::{binom_rat, choose, int, pow, q_int, serde_str, sign, valuation, Rational};
use crate::numerics::{guarded_sum, Exponent, PadicNumber, QContext, SeriesResult, EXACT};
use crate::qeuler::euler_number;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One link of the derivation chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// Each unit block `sum_l (-1)^(pl+a) / [pl+a]^r` against its binomial
    /// expansion through alternating power sums.
    BinomialExpansion,
    /// The second group of that expansion rewritten as `-(w^-r(a)/2) T`.
    TSplit,
    /// The first group reindexed by `k = s - l` into `H + K` shaped sums.
    Reindexing,
    /// Units up to `np` regrouped by residue mod `p` (exact).
    Regrouping,
    /// The combined right side.
    Assembly,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::BinomialExpansion => "binomial_expansion",
            Step::TSplit => "t_split",
            Step::Reindexing => "reindexing",
            Step::Regrouping => "regrouping",
            Step::Assembly => "assembly",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The stated right side matches the left side to the target precision.
    StatedHolds,
    /// The stated right side does not match, the rederived one does, and
    /// the expansion and regrouping steps hold.
    StatedDeviates,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub p: u64,
    #[serde(with = "serde_str")]
    pub q: Rational,
    pub n: u64,
    pub r: u64,
    pub precision: u32,
    #[serde(with = "serde_str")]
    pub lhs_exact: Rational,
    pub lhs: PadicNumber,
    pub rhs: PadicNumber,
    pub residual_valuation: i64,
    pub rederived_rhs: PadicNumber,
    pub rederived_residual_valuation: i64,
    /// Digits known in both left-minus-right differences; an infinite
    /// residual means agreement to this many digits.
    pub comparison_precision: i64,
    pub truncation_index: usize,
    pub step_residuals: BTreeMap<Step, i64>,
    pub rederived_step_residuals: BTreeMap<Step, i64>,
    pub failing_steps: Vec<Step>,
    pub outcome: Outcome,
}

fn check_nr(n: u64, r: u64) -> Result<()> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument(format!("need n, r >= 1, got n = {n}, r = {r}")));
    }
    Ok(())
}

/// Exact `2 sum_{j <= np, (j,p) = 1} (-1)^j / [j]_q^r`.
pub fn expansion_lhs_exact(n: u64, r: u64, p: u64, q: &Rational) -> Result<Rational> {
    check_nr(n, r)?;
    let sum = (1..=n * p)
        .filter(|j| j % p != 0)
        .fold(Rational::zero(), |acc, j| acc + sign(j as i64) / pow(&q_int(j, q), r as i64));
    Ok(int(2) * sum)
}

pub fn expansion_lhs(n: u64, r: u64, ctx: &QContext) -> Result<PadicNumber> {
    let exact = expansion_lhs_exact(n, r, ctx.p(), ctx.q())?;
    Ok(PadicNumber::from_rational(&exact, ctx.p(), ctx.working()))
}

/// `(r / (r + k)) C(-r - 1, k)`, which equals `C(-r, k)`.
fn stated_coefficient(r: u64, k: u64) -> Rational {
    let r = int(r as i64);
    &r / (&r + int(k as i64)) * binom_rat(&(-&r - int(1)), k)
}

/// Sums `term(k)` over `k`, either through `k_max` or until the guard is
/// satisfied; the terms carry a factor `[pn]_q^k`.
fn k_series<T>(n: u64, ctx: &QContext, k_max: Option<usize>, mut term: T) -> Result<SeriesResult>
where
    T: FnMut(u64) -> Result<PadicNumber>,
{
    let p = ctx.p();
    let v = valuation(&q_int(p * n, ctx.q()), p).unwrap_or(EXACT).max(1);
    match k_max {
        Some(m) => {
            let mut sum = PadicNumber::zero(p, EXACT);
            for k in 0..=m {
                sum = &sum + &term(k as u64)?;
            }
            let tail = (m as i64 + 1).saturating_mul(v).min(EXACT);
            Ok(SeriesResult {
                value: sum.truncate(tail),
                last_index: m,
                tail_valuation_bound: tail,
                converged: tail >= ctx.target() as i64,
            })
        }
        None => guarded_sum(ctx, |k| term(k as u64), |k| (k as i64 + 1).saturating_mul(v)),
    }
}

fn padic(r: &Rational, ctx: &QContext) -> PadicNumber {
    PadicNumber::from_rational(r, ctx.p(), ctx.working())
}

/// The right side as stated:
/// `-sum_{k>=0} (r/(r+k)) C(-r-1,k) (-1)^n [pn]_q^k (l_{p,q} + K_{p,q})(r+k, w^(-r-k))
///  - T_{p,q}(r, w^-r)`.
pub fn expansion_rhs_stated(n: u64, r: u64, ctx: &QContext, k_max: Option<usize>) -> Result<SeriesResult> {
    check_nr(n, r)?;
    let p = ctx.p();
    let bracket = q_int(p * n, ctx.q());
    let groups = k_series(n, ctx, k_max, |k| {
        let chi = DirichletCharacter::teichmuller_power(p, -((r + k) as i64))?;
        let s = Exponent::from((r + k) as i64);
        let l = l_pq(&s, &chi, ctx, p)?;
        let kk = k_full(n, &s, &chi, ctx)?;
        let c = stated_coefficient(r, k) * sign(n as i64) * pow(&bracket, k as i64);
        Ok(&(&l.value + &kk.value) * &padic(&c, ctx))
    })?;
    let chi_r = DirichletCharacter::teichmuller_power(p, -(r as i64))?;
    let t = t_full(n, &Exponent::from(r as i64), &chi_r, ctx)?;
    let minus_one = padic(&int(-1), ctx);
    Ok(groups.scale(&minus_one).plus(&t.scale(&minus_one)))
}

/// The right side rederived from the chain of identities.
pub fn expansion_rhs_rederived(n: u64, r: u64, ctx: &QContext, k_max: Option<usize>) -> Result<SeriesResult> {
    check_nr(n, r)?;
    let p = ctx.p();
    let q = ctx.q();
    let bracket = q_int(p * n, q);
    let groups = k_series(n, ctx, k_max, |k| {
        if k == 0 {
            return Ok(PadicNumber::zero(p, EXACT));
        }
        let chi = DirichletCharacter::teichmuller_power(p, -((r + k) as i64))?;
        let s = Exponent::from((r + k) as i64);
        let mut inner = PadicNumber::zero(p, EXACT);
        for a in 1..p {
            let prm = PartialZetaParams::new(a, p)?;
            let h = h_pq(&s, prm, ctx)?;
            let kk = k_partial(n, &s, prm, ctx)?;
            let weight = chi.eval(a as i64, ctx)?.mul_rational(&(int(2) * pow(q, (a * k) as i64)));
            inner = &inner + &(&(&h.value + &kk.value) * &weight);
        }
        let c = binom_rat(&int(-(r as i64)), k) * sign(n as i64) * pow(&bracket, k as i64);
        Ok(&inner * &padic(&c, ctx))
    })?;
    let chi_r = DirichletCharacter::teichmuller_power(p, -(r as i64))?;
    let t = t_full(n, &Exponent::from(r as i64), &chi_r, ctx)?;
    Ok(groups
        .scale(&padic(&int(-1), ctx))
        .plus(&t.scale(&padic(&Rational::new((-1).into(), 2.into()), ctx))))
}

/// Residuals of the per-unit identities for one unit `a`, truncating every
/// power series in `[F]_q` after total degree `depth`.
struct UnitResiduals {
    binomial_expansion: i64,
    t_split: i64,
    reindexing_stated: i64,
    reindexing_rederived: i64,
}

fn unit_block_exact(n: u64, r: u64, a: u64, p: u64, q: &Rational) -> Rational {
    (0..n).fold(Rational::zero(), |acc, l| {
        let m = p * l + a;
        acc + sign(m as i64) / pow(&q_int(m, q), r as i64)
    })
}

fn unit_residuals(n: u64, r: u64, a: u64, ctx: &QContext, depth: u64) -> Result<UnitResiduals> {
    let p = ctx.p();
    let q = ctx.q();
    let f = p;
    let big_q = pow(q, f as i64);
    let bracket_a = q_int(a, q);
    let x = pow(q, a as i64) * q_int(f, q) / &bracket_a;
    let bracket_n = q_int(n, &big_q);
    let sa = sign(a as i64);
    let sn = sign(n as i64);
    let half = Rational::new(1.into(), 2.into());
    let a_pow_r = pow(&bracket_a, -(r as i64));
    let minus_r = int(-(r as i64));
    let bound = depth as i64 + 1;

    let euler: Vec<Rational> = (0..=depth).map(|l| euler_number(l, &big_q)).collect::<Result<_>>()?;
    let x_pows: Vec<Rational> = (0..=depth).map(|s| pow(&x, s as i64)).collect();
    let big_q_pows: Vec<Rational> = (0..=depth).map(|l| pow(&big_q, (n * l) as i64)).collect();

    // sum_{l<s} C(s,l) Q^(nl) E_{l,Q} [n]_Q^(s-l)
    let inner = |s: u64| -> Rational {
        (0..s).fold(Rational::zero(), |acc, l| {
            acc + Rational::from_integer(choose(s, l))
                * &big_q_pows[l as usize]
                * &euler[l as usize]
                * pow(&bracket_n, (s - l) as i64)
        })
    };

    let mut g1 = Rational::zero();
    let mut g2 = Rational::zero();
    for s in 0..=depth {
        let common = &a_pow_r * &x_pows[s as usize] * &sa * binom_rat(&minus_r, s) * &half;
        g1 -= &common * &sn * inner(s);
        g2 -= &common * (&sn * &big_q_pows[s as usize] - int(1)) * &euler[s as usize];
    }

    let block = unit_block_exact(n, r, a, p, q);
    let binomial_expansion = residual_rational(&(&block - &g1 - &g2), p, bound);

    let prm = PartialZetaParams::new(a, f)?;
    let t = t_partial(n, &Exponent::from(r as i64), prm, ctx)?;
    let w = crate::numerics::teichmuller(&a.into(), p, ctx.working())?.pow(-(r as i64))?;
    let t_term = &(&w * &t.value) * &padic(&half, ctx);
    let split_lhs = padic(&(&block - &g1), ctx).truncate(bound);
    let t_split = residual(&split_lhs, &(-&t_term));

    // The first group without its leading sign, reindexed by k = s - l.
    let reindex_lhs = -g1.clone();
    let bracket_fn = q_int(f * n, q);
    let mut stated = Rational::zero();
    let mut rederived = Rational::zero();
    for k in 0..=depth {
        let c = &sn * pow(&bracket_a, -((k + r) as i64)) * pow(q, (a * k) as i64) * pow(&bracket_fn, k as i64)
            * &sa
            * &half;
        let minus_rk = int(-((r + k) as i64));
        for l in 0..=(depth - k) {
            let term = binom_rat(&minus_rk, l) * &x_pows[l as usize] * &euler[l as usize];
            stated += stated_coefficient(r, k) * &c * &term;
            if k >= 1 {
                rederived += binom_rat(&minus_r, k) * &c * &term * &big_q_pows[l as usize];
            }
        }
    }
    Ok(UnitResiduals {
        binomial_expansion,
        t_split,
        reindexing_stated: residual_rational(&(&reindex_lhs - &stated), p, bound),
        reindexing_rederived: residual_rational(&(&reindex_lhs - &rederived), p, bound),
    })
}

/// Computes both right sides and every step residual for one `(p, q, n, r)`.
pub fn expansion_report(n: u64, r: u64, ctx: &QContext) -> Result<ExpansionReport> {
    check_nr(n, r)?;
    ctx.require_q_ne_one()?;
    let p = ctx.p();
    let q = ctx.q();
    let target = ctx.target() as i64;
    let lhs_exact = expansion_lhs_exact(n, r, p, q)?;
    let lhs = padic(&lhs_exact, ctx);
    let stated = expansion_rhs_stated(n, r, ctx, None)?;
    let rederived = expansion_rhs_rederived(n, r, ctx, None)?;

    let depth = ctx.working() as u64 + 2;
    let units = (1..p).map(|a| unit_residuals(n, r, a, ctx, depth)).collect::<Result<Vec<_>>>()?;
    let min_of = |f: fn(&UnitResiduals) -> i64| units.iter().map(f).min().unwrap_or(INFINITE_VALUATION);

    let regrouped = int(2) * (1..p).fold(Rational::zero(), |acc, a| acc + unit_block_exact(n, r, a, p, q));
    let regrouping = residual_rational(&(&lhs_exact - &regrouped), p, EXACT);

    let mut steps = BTreeMap::new();
    steps.insert(Step::BinomialExpansion, min_of(|u| u.binomial_expansion));
    steps.insert(Step::TSplit, min_of(|u| u.t_split));
    steps.insert(Step::Reindexing, min_of(|u| u.reindexing_stated));
    steps.insert(Step::Regrouping, regrouping);
    steps.insert(Step::Assembly, residual(&stated.value, &rederived.value));

    let rederived_residual = residual(&lhs, &rederived.value);
    let mut rederived_steps = BTreeMap::new();
    rederived_steps.insert(Step::Reindexing, min_of(|u| u.reindexing_rederived));
    rederived_steps.insert(Step::Assembly, rederived_residual);

    let residual_valuation = residual(&lhs, &stated.value);
    let comparison_precision = (&lhs - &stated.value)
        .abs_precision()
        .min((&lhs - &rederived.value).abs_precision());
    let failing_steps: Vec<Step> = steps.iter().filter(|(_, &v)| v < target).map(|(&s, _)| s).collect();
    let outcome = if comparison_precision < target {
        Outcome::Unresolved
    } else if residual_valuation >= target {
        Outcome::StatedHolds
    } else if rederived_residual >= target
        && steps[&Step::BinomialExpansion] >= target
        && steps[&Step::Regrouping] >= target
    {
        Outcome::StatedDeviates
    } else {
        Outcome::Unresolved
    };

    Ok(ExpansionReport {
        p,
        q: q.clone(),
        n,
        r,
        precision: ctx.target(),
        lhs_exact,
        lhs,
        rhs: stated.value,
        residual_valuation,
        rederived_rhs: rederived.value,
        rederived_residual_valuation: rederived_residual,
        comparison_precision,
        truncation_index: stated.last_index.max(rederived.last_index),
        step_residuals: steps,
        rederived_step_residuals: rederived_steps,
        failing_steps,
        outcome,
    })
}

/// Reports over `(p, n, r)` grid points with `q = 1 + p`.
pub fn expansion_grid(points: &[(u64, u64, u64)], target: u32, jobs: usize) -> Result<Vec<ExpansionReport>> {
    run_parallel(points, jobs, |&(p, n, r)| {
        let ctx = QContext::canonical(p, target)?;
        expansion_report(n, r, &ctx)
    })
    .into_iter()
    .collect()
}
