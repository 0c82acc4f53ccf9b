use super::rational::{int, is_odd_prime, valuation, Rational};
use crate::error::{Error, Result};
use num_traits::One;

/// Extra digits carried past the target precision by default.
pub const DEFAULT_BUFFER: u32 = 10;
pub const DEFAULT_GUARD: u32 = 3;
pub const DEFAULT_PRECISION: u32 = 8;

/// Ambient parameters shared by every p-adic computation: the prime, the
/// deformation parameter `q`, and the precision/truncation policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QContext {
    p: u64,
    q: Rational,
    target: u32,
    working: u32,
    guard: u32,
    cap: usize,
}

impl QContext {
    /// Context with target precision `target`, working precision
    /// `target + 10`, guard 3 and cap `64 * target`.
    pub fn new(p: u64, q: Rational, target: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if target == 0 {
            return Err(Error::InvalidContext("target precision must be at least 1".into()));
        }
        if !q.is_one() && valuation(&(&q - int(1)), p).is_none_or(|v| v < 1) {
            return Err(Error::InvalidContext(format!(
                "q = {q} must satisfy v_p(q - 1) >= 1 for p = {p}"
            )));
        }
        Ok(Self {
            p,
            q,
            target,
            working: target + DEFAULT_BUFFER,
            guard: DEFAULT_GUARD,
            cap: 64 * target as usize,
        })
    }

    /// The canonical choice `q = 1 + p`.
    pub fn canonical(p: u64, target: u32) -> Result<Self> {
        Self::new(p, int(1 + p as i64), target)
    }

    pub fn with_working(mut self, working: u32) -> Result<Self> {
        if working < self.target {
            return Err(Error::InvalidContext(format!(
                "working precision {working} below target {}",
                self.target
            )));
        }
        self.working = working;
        Ok(self)
    }

    pub fn with_guard(mut self, guard: u32) -> Result<Self> {
        if guard == 0 {
            return Err(Error::InvalidContext("guard must be at least 1".into()));
        }
        self.guard = guard;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidContext("cap must be at least 1".into()));
        }
        self.cap = cap;
        Ok(self)
    }

    /// Same policy, different `q`.
    pub fn with_q(&self, q: Rational) -> Result<Self> {
        let fresh = Self::new(self.p, q, self.target)?;
        Ok(Self { q: fresh.q, ..self.clone() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn working(&self) -> u32 {
        self.working
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn require_q_ne_one(&self) -> Result<()> {
        if self.q.is_one() {
            Err(Error::ClassicalLimit)
        } else {
            Ok(())
        }
    }
}
