//! Dirichlet characters whose values live in `Q_p`: the trivial character,
//! powers of the Teichmüller character, quadratic characters of odd
//! conductor, and finite products of these.

use crate::error::{Error, Result};
use crate::numerics::{teichmuller, PadicNumber, QContext, EXACT};
use num_bigint::BigInt;
use num_integer::Integer;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharacterAtom {
    Trivial,
    /// `w^exponent` for the prime `p`, exponent reduced mod `p - 1`.
    Teichmuller { p: u64, exponent: u64 },
    /// The Jacobi symbol `(n | d)` for odd squarefree `d`.
    Quadratic { d: u64 },
}

impl CharacterAtom {
    pub fn conductor(&self) -> u64 {
        match *self {
            CharacterAtom::Trivial => 1,
            CharacterAtom::Teichmuller { exponent: 0, .. } => 1,
            CharacterAtom::Teichmuller { p, .. } => p,
            CharacterAtom::Quadratic { d } => d,
        }
    }
}

/// A product of atoms, kept normalized: at most one Teichmüller atom (with
/// nonzero exponent), quadratic atoms sorted, no trivial atoms. The empty
/// product is the trivial character, which is 1 on every integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    factors: Vec<CharacterAtom>,
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "Jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut m = d;
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            m /= f;
            if m % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

impl DirichletCharacter {
    pub fn trivial() -> Self {
        Self { factors: Vec::new() }
    }

    /// `w^t` for the prime `p`.
    pub fn teichmuller_power(p: u64, t: i64) -> Result<Self> {
        if !crate::numerics::rational::is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Self::trivial().twist(t, p)
    }

    /// The quadratic character `n -> (n | d)`.
    pub fn quadratic(d: u64) -> Result<Self> {
        if d % 2 == 0 {
            return Err(Error::EvenConductor(d));
        }
        if d == 0 || !is_squarefree(d) {
            return Err(Error::InvalidArgument(format!("quadratic conductor {d} is not squarefree")));
        }
        if d == 1 {
            return Ok(Self::trivial());
        }
        Ok(Self { factors: vec![CharacterAtom::Quadratic { d }] })
    }

    pub fn factors(&self) -> &[CharacterAtom] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    fn teich(&self) -> Option<(u64, u64)> {
        self.factors.iter().find_map(|a| match *a {
            CharacterAtom::Teichmuller { p, exponent } => Some((p, exponent)),
            _ => None,
        })
    }

    /// Exponent `t` of the Teichmüller factor (0 if absent).
    pub fn teichmuller_exponent(&self) -> u64 {
        self.teich().map_or(0, |(_, t)| t)
    }

    fn normalized(mut factors: Vec<CharacterAtom>) -> Self {
        factors.retain(|a| a.conductor() != 1);
        factors.sort();
        Self { factors }
    }

    /// `chi * other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for atom in &other.factors {
            out = match *atom {
                CharacterAtom::Teichmuller { p, exponent } => out.twist(exponent as i64, p)?,
                a => {
                    let mut f = out.factors;
                    f.push(a);
                    Self::normalized(f)
                }
            };
        }
        Ok(out)
    }

    /// `chi * w^t`, merging with an existing Teichmüller factor.
    pub fn twist(&self, t: i64, p: u64) -> Result<Self> {
        let order = p as i64 - 1;
        let mut exponent = t.rem_euclid(order) as u64;
        if let Some((q, e)) = self.teich() {
            if q != p {
                return Err(Error::InvalidArgument(format!(
                    "cannot combine Teichmüller characters for p = {q} and p = {p}"
                )));
            }
            exponent = (exponent + e) % (p - 1);
        }
        let mut factors: Vec<_> = self
            .factors
            .iter()
            .copied()
            .filter(|a| !matches!(a, CharacterAtom::Teichmuller { .. }))
            .collect();
        factors.push(CharacterAtom::Teichmuller { p, exponent });
        Ok(Self::normalized(factors))
    }

    /// Least common multiple of the atom conductors.
    pub fn conductor(&self) -> u64 {
        self.factors.iter().fold(1, |acc, a| acc.lcm(&a.conductor()))
    }

    /// `Some(value)` when every value of the character is in `{-1, 0, 1}`:
    /// no Teichmüller factor, or the factor `w^((p-1)/2)`, which is the
    /// Legendre symbol.
    pub fn exact_value(&self, n: i64) -> Option<i8> {
        let f = self.conductor();
        if (n.rem_euclid(f as i64) as u64).gcd(&f) != 1 {
            return Some(0);
        }
        let mut value = 1i8;
        for atom in &self.factors {
            value *= match *atom {
                CharacterAtom::Trivial => 1,
                CharacterAtom::Quadratic { d } => jacobi(n, d),
                CharacterAtom::Teichmuller { p, exponent } if 2 * exponent == p - 1 => jacobi(n, p),
                CharacterAtom::Teichmuller { .. } => return None,
            };
        }
        Some(value)
    }

    pub fn is_real_valued(&self) -> bool {
        match self.teich() {
            None => true,
            Some((p, e)) => 2 * e == p - 1,
        }
    }

    /// `chi(n)` as an element of `Z_p` to the context's working precision.
    pub fn eval(&self, n: i64, ctx: &QContext) -> Result<PadicNumber> {
        let p = ctx.p();
        if let Some((q, _)) = self.teich() {
            if q != p {
                return Err(Error::InvalidArgument(format!(
                    "character for p = {q} evaluated in a {p}-adic context"
                )));
            }
        }
        if let Some(v) = self.exact_value(n) {
            return Ok(if v == 0 {
                PadicNumber::zero(p, EXACT)
            } else {
                PadicNumber::from_i64(v as i64, p, ctx.working())
            });
        }
        let mut value = PadicNumber::one(p, ctx.working());
        for atom in &self.factors {
            let factor = match *atom {
                CharacterAtom::Trivial => continue,
                CharacterAtom::Quadratic { d } => PadicNumber::from_i64(jacobi(n, d) as i64, p, ctx.working()),
                CharacterAtom::Teichmuller { exponent, .. } => {
                    teichmuller(&BigInt::from(n), p, ctx.working())?.pow(exponent as i64)?
                }
            };
            value = &value * &factor;
        }
        Ok(value)
    }

    /// The Teichmüller prime this character is tied to, if any.
    pub fn prime(&self) -> Option<u64> {
        self.teich().map(|(p, _)| p)
    }

    /// Parses `trivial`, `teich:t`, `quad:d` and `*`-joined products. The
    /// prime for Teichmüller factors comes from the caller.
    pub fn parse(spec: &str, p: Option<u64>) -> Result<Self> {
        let mut chi = Self::trivial();
        for token in spec.split('*').map(str::trim) {
            let bad = || Error::CharacterSyntax(format!("bad factor {token:?} in {spec:?}"));
            let atom = match token.split_once(':') {
                None if token == "trivial" || token == "1" => Self::trivial(),
                Some(("teich", t)) => {
                    let t: i64 = t.trim().parse().map_err(|_| bad())?;
                    let p = p.ok_or_else(|| {
                        Error::CharacterSyntax(format!("{token:?} needs a prime (--p)"))
                    })?;
                    Self::teichmuller_power(p, t)?
                }
                Some(("quad", d)) => Self::quadratic(d.trim().parse().map_err(|_| bad())?)?,
                _ => return Err(bad()),
            };
            chi = chi.product(&atom)?;
        }
        Ok(chi)
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|a| match *a {
                CharacterAtom::Trivial => "trivial".to_string(),
                CharacterAtom::Teichmuller { exponent, .. } => format!("teich:{exponent}"),
                CharacterAtom::Quadratic { d } => format!("quad:{d}"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
