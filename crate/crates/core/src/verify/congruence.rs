//! Congruence properties of `l_{p,q}(s, w^t)`: the closed form at negative
//! integers, and a scan of integrality and mod-p constancy in `s`.

use super::{residual, INFINITE_VALUATION};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfun::{interpolation_precision, l_pq};
use crate::numerics::rational::{pow, q_int, serde_str, Rational};
use crate::numerics::{Exponent, PadicNumber, QContext};
use crate::qeuler::euler_number;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCheck {
    pub p: u64,
    pub n: u64,
    pub t: i64,
    pub holds: bool,
    /// Valuation of `l_{p,q}(-n, w^t)` minus the closed form, capped at the
    /// digits known.
    pub valuation: i64,
    /// Precision the agreement is required at.
    pub required: i64,
    /// `E_{n,q} - [p]_q^n E_{n,q^p}`.
    #[serde(with = "serde_str")]
    pub expected: Rational,
    pub value: PadicNumber,
}

/// Checks `l_{p,q}(-n, w^t) = E_{n,q} - [p]_q^n E_{n,q^p}` for
/// `n = t (mod p - 1)`, at precision `N - v_p(n!) - 2`.
pub fn congruence_check(n: u64, t: i64, ctx: &QContext) -> Result<CongruenceCheck> {
    let p = ctx.p();
    let order = p as i64 - 1;
    if (n as i64 - t).rem_euclid(order) != 0 {
        return Err(Error::InvalidArgument(format!("need n = t mod {order}, got n = {n}, t = {t}")));
    }
    let q = ctx.q();
    let expected = euler_number(n, q)? - pow(&q_int(p, q), n as i64) * euler_number(n, &pow(q, p as i64))?;
    let chi = DirichletCharacter::teichmuller_power(p, t)?;
    let value = l_pq(&Exponent::from(-(n as i64)), &chi, ctx, p)?.value;
    let valuation = value.agreement(&PadicNumber::from_rational(&expected, p, ctx.working()));
    let required = interpolation_precision(n, p, ctx.target());
    Ok(CongruenceCheck {
        p,
        n,
        t,
        holds: valuation >= required,
        valuation,
        required,
        expected,
        value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSample {
    pub s: i64,
    pub value: PadicNumber,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDifference {
    pub s1: i64,
    pub s2: i64,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub p: u64,
    #[serde(with = "serde_str")]
    pub q: Rational,
    pub t: i64,
    /// `t mod (p - 1)`.
    pub residue_class: i64,
    pub precision: u32,
    pub samples: Vec<ScanSample>,
    pub min_valuation: i64,
    /// Every sampled value is a p-adic integer.
    pub integral: bool,
    pub pairs: Vec<PairDifference>,
    pub min_pair_valuation: i64,
    /// All sampled values agree mod p.
    pub constant_mod_p: bool,
}

fn valuation_of(x: &PadicNumber) -> i64 {
    if x.is_zero() {
        INFINITE_VALUATION
    } else {
        x.valuation()
    }
}

/// Evaluates `l_{p,q}(s, w^t)` at the sample points and records integrality
/// and pairwise agreement mod p. Nothing is asserted.
pub fn congruence_scan(t: i64, samples: &[i64], ctx: &QContext) -> Result<ScanReport> {
    let p = ctx.p();
    let chi = DirichletCharacter::teichmuller_power(p, t)?;
    let samples = samples
        .iter()
        .map(|&s| {
            let value = l_pq(&Exponent::from(s), &chi, ctx, p)?.value;
            let valuation = valuation_of(&value);
            Ok(ScanSample { s, value, valuation })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        for y in &samples[i + 1..] {
            pairs.push(PairDifference { s1: x.s, s2: y.s, valuation: residual(&x.value, &y.value) });
        }
    }
    let min_valuation = samples.iter().map(|x| x.valuation).min().unwrap_or(INFINITE_VALUATION);
    let min_pair_valuation = pairs.iter().map(|x| x.valuation).min().unwrap_or(INFINITE_VALUATION);
    Ok(ScanReport {
        p,
        q: ctx.q().clone(),
        t,
        residue_class: t.rem_euclid(p as i64 - 1),
        precision: ctx.target(),
        samples,
        min_valuation,
        integral: min_valuation >= 0,
        pairs,
        min_pair_valuation,
        constant_mod_p: min_pair_valuation >= 1,
    })
}
