//! Dense univariate polynomials over Q or F_p.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::{CoefficientRing, Q, Z};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: CoefficientRing,
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(ring: CoefficientRing, coeffs: Vec<Q>) -> Self {
        let mut p = Poly {
            coeffs: coeffs.into_iter().map(|c| ring.reduce(c)).collect(),
            ring,
        };
        p.trim();
        p
    }

    pub fn zero(ring: CoefficientRing) -> Self {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn one(ring: CoefficientRing) -> Self {
        Self::new(ring, vec![Q::one()])
    }

    /// t - r
    pub fn linear(ring: CoefficientRing, r: &Q) -> Self {
        Self::new(ring, vec![ring.neg(r), Q::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = o.coeffs.get(i).unwrap_or(&z);
                a + b
            })
            .collect();
        Poly::new(self.ring, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(self.ring, c)
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.ring.inv(&self.lead()) {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let ring = self.ring;
        let inv = ring.inv(&d.lead()).expect("field coefficients");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len();
        if r.len() < dd {
            return (Poly::zero(ring), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = ring.mul(&r[i + dd - 1], &inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] = ring.sub(&r[i + j], &ring.mul(&c, dj));
            }
            quot[i] = c;
        }
        (Poly::new(ring, quot), Poly::new(ring, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// (g, u, v) with u*a + v*b = g monic (or zero).
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let ring = a.ring;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(ring), Poly::zero(ring));
        let (mut t0, mut t1) = (Poly::zero(ring), Poly::one(ring));
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            let s = s0.sub(&qt.mul(&s1));
            let t = t0.sub(&qt.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = ring.inv(&r0.lead()).expect("field");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    /// Multiplicity of r as a root.
    pub fn root_multiplicity(&self, r: &Q) -> usize {
        let lin = Poly::linear(self.ring, r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (qt, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = qt;
            k += 1;
        }
        k
    }

    /// Roots in the coefficient field: rational-root search over Q,
    /// exhaustive search over F_p. `None` if the search would exceed `cap`
    /// candidates.
    pub fn roots(&self, cap: u64) -> Option<Vec<Q>> {
        if self.degree() < 1 {
            return Some(Vec::new());
        }
        match self.ring {
            CoefficientRing::PrimeField(p) => {
                if p > cap {
                    return None;
                }
                Some(
                    (0..p)
                        .map(|x| Q::from_integer(Z::from(x)))
                        .filter(|x| self.eval(x).is_zero())
                        .collect(),
                )
            }
            _ => self.rational_roots(cap),
        }
    }

    fn rational_roots(&self, cap: u64) -> Option<Vec<Q>> {
        let den = crate::ring::common_denominator(self.coeffs.iter());
        let ints: Vec<Z> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
        if low > 0 {
            roots.push(Q::zero());
        }
        let a0 = ints[low].abs();
        let an = ints.last().expect("nonzero").abs();
        let num = divisors(&a0, cap)?;
        let dens = divisors(&an, cap)?;
        if (num.len() as u128) * (dens.len() as u128) > cap as u128 {
            return None;
        }
        for pn in &num {
            for qd in &dens {
                for s in [1i64, -1] {
                    let r = Q::new(pn * Z::from(s), qd.clone());
                    if !roots.contains(&r) && self.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        Some(roots)
    }
}

/// Positive divisors of n > 0 by trial division, or `None` past `cap` steps.
fn divisors(n: &Z, cap: u64) -> Option<Vec<Z>> {
    let mut factors: Vec<(Z, u32)> = Vec::new();
    let mut m = n.clone();
    let mut f = Z::from(2);
    let mut steps = 0u64;
    while &f * &f <= m {
        steps += 1;
        if steps > cap {
            return None;
        }
        let mut e = 0;
        while m.is_multiple_of(&f) {
            m /= &f;
            e += 1;
        }
        if e > 0 {
            factors.push((f.clone(), e));
        }
        f += 1;
    }
    if m > Z::one() {
        factors.push((m, 1));
    }
    let mut out = vec![Z::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = Z::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qf};

    fn p(c: &[i64]) -> Poly {
        Poly::new(CoefficientRing::Rationals, c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 1)(t + 3)(t^2 + 1)
        let f = p(&[-1, 2]).mul(&p(&[3, 1])).mul(&p(&[1, 0, 1]));
        let mut r = f.roots(10_000).unwrap();
        r.sort();
        assert_eq!(r, vec![q(-3), qf(1, 2)]);
    }

    #[test]
    fn bezout_identity() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-2, 1]);
        let (g, u, v) = Poly::ext_gcd(&a, &b);
        assert_eq!(g, p(&[1]));
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }

    #[test]
    fn roots_mod_p() {
        let f = Poly::new(CoefficientRing::PrimeField(5), vec![q(1), q(0), q(1)]);
        assert_eq!(f.roots(100).unwrap(), vec![q(2), q(3)]);
        assert_eq!(p(&[0, 0, 1]).root_multiplicity(&q(0)), 2);
    }
}
