//! The limit `q -> 1` of `E_{m,q}`, approached through `q = 1 + p^k`,
//! against classical Euler numbers obtained from Bernoulli numbers.

use super::INFINITE_VALUATION;
use crate::error::Result;
use crate::numerics::rational::{choose, int, pow, valuation, Rational};
use crate::qeuler::euler_number;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// `B_0, ..., B_m` from `sum_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![int(1)];
    for k in 1..=m {
        let s = (0..k).fold(Rational::zero(), |acc, j| {
            acc + Rational::from_integer(choose(k as u64 + 1, j as u64)) * &b[j]
        });
        b.push(-s / int(k as i64 + 1));
    }
    b
}

/// `E_m(0) = 2 (1 - 2^(m+1)) B_{m+1} / (m + 1)` for `m = 0..=m_max`.
pub fn classical_euler_numbers(m_max: usize) -> Vec<Rational> {
    let b = bernoulli_numbers(m_max + 1);
    (0..=m_max)
        .map(|m| int(2) * (int(1) - pow(&int(2), m as i64 + 1)) * &b[m + 1] / int(m as i64 + 1))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitEntry {
    pub m: u64,
    pub k: u32,
    /// `v_p(E_{m, 1+p^k} - E_m)`.
    pub valuation: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReport {
    pub p: u64,
    /// Allowed shortfall `c` in `v_p(E_{m,q_k} - E_m) >= k - c`.
    pub slack: i64,
    pub entries: Vec<LimitEntry>,
    pub holds: bool,
}

/// Checks `v_p(E_{m, 1+p^k} - E_m) >= k - slack` for `m <= m_max` and
/// every `k` in `ks`.
pub fn classical_limit_check(m_max: u64, p: u64, ks: &[u32], slack: i64) -> Result<LimitReport> {
    let classical = classical_euler_numbers(m_max as usize);
    let mut entries = Vec::new();
    for &k in ks {
        let q = int(1) + pow(&int(p as i64), k as i64);
        for m in 0..=m_max {
            let d = euler_number(m, &q)? - &classical[m as usize];
            let v = if d.is_zero() { INFINITE_VALUATION } else { valuation(&d, p).unwrap_or(INFINITE_VALUATION) };
            entries.push(LimitEntry { m, k, valuation: v, holds: v >= k as i64 - slack });
        }
    }
    let holds = entries.iter().all(|e| e.holds);
    Ok(LimitReport { p, slack, entries, holds })
}
