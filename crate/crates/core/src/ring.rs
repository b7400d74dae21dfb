//! Coefficient rings. Every scalar is stored as a `BigRational`; the ring
//! decides which rationals are valid and how results are reduced.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of |n| in increasing order, without multiplicity.
pub fn prime_factors(n: &Z) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while Z::from(p) * Z::from(p) <= n {
        let zp = Z::from(p);
        if (&n % &zp).is_zero() {
            out.push(p);
            while (&n % &zp).is_zero() {
                n /= &zp;
            }
        }
        p += 1;
    }
    if n > Z::one() {
        out.push(n.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let zp = Z::from(p);
    let mut v = 0i64;
    let mut n = x.numer().clone();
    while (&n % &zp).is_zero() {
        n /= &zp;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % &zp).is_zero() {
        d /= &zp;
        v -= 1;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    Rationals,
    Integers,
    /// Rationals whose denominator is prime to p.
    LocalizedIntegers(u64),
    PrimeField(u64),
    ResidueRing(u64),
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::LocalizedIntegers(p) => write!(f, "Z_loc({p})"),
            CoefficientRing::PrimeField(p) => write!(f, "F({p})"),
            CoefficientRing::ResidueRing(m) => write!(f, "Z/{m}"),
        }
    }
}

impl CoefficientRing {
    pub fn localized(p: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidRing(format!("Z_loc({p}) needs an odd prime")));
        }
        Ok(CoefficientRing::LocalizedIntegers(p))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharTwo);
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("F({p}) needs an odd prime")));
        }
        Ok(CoefficientRing::PrimeField(p))
    }

    pub fn residue(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("Z/{m} needs m >= 2")));
        }
        Ok(CoefficientRing::ResidueRing(m))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::Rationals | CoefficientRing::PrimeField(_))
    }

    /// 0 for the characteristic-zero rings.
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) => *p,
            CoefficientRing::ResidueRing(m) => *m,
            _ => 0,
        }
    }

    fn modulus(&self) -> Option<Z> {
        match self {
            CoefficientRing::PrimeField(p) | CoefficientRing::ResidueRing(p) => Some(Z::from(*p)),
            _ => None,
        }
    }

    /// Check that `x` denotes an element and return its canonical form.
    /// Over F_p a rational a/b with p not dividing b is read as a * b^-1.
    pub fn element(&self, x: &Q) -> Result<Q> {
        let bad = || Error::InvalidElement {
            value: x.to_string(),
            ring: self.to_string(),
        };
        match self {
            CoefficientRing::Rationals => Ok(x.clone()),
            CoefficientRing::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(bad())
                }
            }
            CoefficientRing::LocalizedIntegers(p) => {
                if (x.denom() % Z::from(*p)).is_zero() {
                    Err(bad())
                } else {
                    Ok(x.clone())
                }
            }
            CoefficientRing::PrimeField(_) | CoefficientRing::ResidueRing(_) => {
                let m = self.modulus().unwrap();
                let d = x.denom().mod_floor(&m);
                let inv = mod_inverse(&d, &m).ok_or_else(bad)?;
                Ok(Q::from_integer((x.numer() * inv).mod_floor(&m)))
            }
        }
    }

    /// Canonical form of a value already known to be valid.
    pub fn reduce(&self, x: Q) -> Q {
        match self.modulus() {
            Some(m) => {
                if x.is_integer() {
                    Q::from_integer(x.numer().mod_floor(&m))
                } else {
                    self.element(&x).expect("value outside the ring")
                }
            }
            None => x,
        }
    }

    pub fn add(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Q) -> Q {
        self.reduce(-a)
    }

    /// Multiplicative inverse inside the ring, if it exists.
    pub fn inv(&self, a: &Q) -> Option<Q> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoefficientRing::Rationals => Some(a.recip()),
            CoefficientRing::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            CoefficientRing::LocalizedIntegers(p) => {
                if (a.numer() % Z::from(*p)).is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            CoefficientRing::PrimeField(_) | CoefficientRing::ResidueRing(_) => {
                let m = self.modulus().unwrap();
                mod_inverse(a.numer(), &m).map(Q::from_integer)
            }
        }
    }

    /// The field used for rank and kernel computations: Q for the
    /// characteristic-zero rings, the ring itself for F_p.
    pub fn linear_field(&self) -> Result<CoefficientRing> {
        match self {
            CoefficientRing::PrimeField(_) => Ok(*self),
            CoefficientRing::ResidueRing(_) => Err(Error::NotAField(self.to_string())),
            _ => Ok(CoefficientRing::Rationals),
        }
    }

    pub fn sign(&self, odd: bool, a: &Q) -> Q {
        if odd {
            self.neg(a)
        } else {
            a.clone()
        }
    }
}

/// Inverse of `a` modulo `m`, if gcd(a, m) = 1.
pub fn mod_inverse(a: &Z, m: &Z) -> Option<Z> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// (-1)^k as a rational.
pub fn sign_of(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Z {
    xs.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}
