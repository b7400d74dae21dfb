//! Finite rings given by structure constants over a product of cyclic
//! groups, their unit groups, and abelian quotients of those groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::GradedAlgebra;
use crate::linalg::{field, hermite_normal_form, smith_normal_form, QMatrix, ZLattice, ZMatrix};
use crate::orders::graded_basis;
use crate::ring::{CoefficientRing, Q, Z};

/// Largest finite ring whose elements are enumerated.
pub const ENUMERATION_CAP: u128 = 1_000_000;

const GENERATOR_SEED: u64 = 0x6e;

/// A finite abelian group in invariant-factor form d_1 | d_2 | ... with
/// every d_i > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    /// The group Z/c_1 x Z/c_2 x ... for arbitrary positive c_i.
    pub fn from_cyclic_factors(cs: &[u64]) -> Self {
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &c in cs {
            for (p, e) in factorize(c) {
                parts.entry(p).or_default().push(e);
            }
        }
        Self::from_prime_powers(parts)
    }

    /// Assembles invariant factors from the exponents of the cyclic
    /// p-parts for each prime p.
    fn from_prime_powers(mut parts: BTreeMap<u64, Vec<u32>>) -> Self {
        let len = parts.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, es) in parts.iter_mut() {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in es.iter().enumerate() {
                factors[len - 1 - i] *= p.pow(*e);
            }
        }
        factors.retain(|&d| d > 1);
        FiniteAbelianGroup {
            invariant_factors: factors,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant modulo m by Euclidean row reduction, valid for composite m.
fn det_mod(mut a: Vec<Vec<u64>>, m: u64) -> u64 {
    let n = a.len();
    let mut neg = false;
    for c in 0..n {
        for r in c + 1..n {
            while a[r][c] != 0 {
                let q = a[c][c] / a[r][c];
                if q != 0 {
                    for k in c..n {
                        let sub = (q as u128 * a[r][k] as u128 % m as u128) as u64;
                        a[c][k] = (a[c][k] + m - sub) % m;
                    }
                }
                a.swap(c, r);
                neg = !neg;
            }
        }
        if a[c][c] == 0 {
            return 0;
        }
    }
    let mut d = 1u128;
    for (i, row) in a.iter().enumerate() {
        d = d * row[i] as u128 % m as u128;
    }
    let d = d as u64;
    if neg {
        (m - d) % m
    } else {
        d
    }
}

/// A finite ring on the group Z/m_1 x ... x Z/m_k with integral
/// structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    moduli: Vec<u64>,
    /// table[i * k + j] holds the coordinates of b_i b_j.
    table: Vec<Vec<u64>>,
    one: Vec<u64>,
}

impl FiniteRing {
    pub fn new(moduli: Vec<u64>, table: Vec<Vec<u64>>, one: Vec<u64>) -> Result<Self> {
        let k = moduli.len();
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidParameter("moduli must exceed 1".into()));
        }
        if table.len() != k * k || table.iter().any(|r| r.len() != k) || one.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                found: table.len(),
            });
        }
        let ring = FiniteRing { moduli, table, one };
        let table = ring
            .table
            .iter()
            .map(|r| ring.normalize(r.clone()))
            .collect();
        let one = ring.normalize(ring.one.clone());
        let ring = FiniteRing { table, one, ..ring };
        for i in 0..k {
            let b = ring.basis_vector(i);
            if ring.mul(&ring.one, &b) != b || ring.mul(&b, &ring.one) != b {
                return Err(Error::InvalidParameter("finite ring unit law fails".into()));
            }
        }
        Ok(ring)
    }

    /// (Z/m)^r with coordinatewise multiplication.
    pub fn diagonal(m: u64, r: usize) -> Result<Self> {
        let mut table = vec![vec![0; r]; r * r];
        for i in 0..r {
            table[i * r + i][i] = 1;
        }
        Self::new(vec![m; r], table, vec![1; r])
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn one(&self) -> &[u64] {
        &self.one
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    pub fn size(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1 % self.moduli[i];
        v
    }

    fn normalize(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            *x %= m;
        }
        v
    }

    /// Reduces integer coordinates.
    pub fn from_integers(&self, v: &[Z]) -> Vec<u64> {
        v.iter()
            .zip(&self.moduli)
            .map(|(x, &m)| {
                let r = x % Z::from(m);
                let r = if r < Z::zero() { r + Z::from(m) } else { r };
                r.to_u64().expect("reduced residue")
            })
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.dim();
        let mut acc = vec![0u128; k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x as u128 * y as u128;
                for (t, &c) in self.table[i * k + j].iter().enumerate() {
                    if c != 0 {
                        acc[t] = (acc[t] + xy * c as u128) % self.moduli[t] as u128;
                    }
                }
            }
        }
        acc.into_iter().map(|x| x as u64).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Mixed-radix code of an element, used as a hash key.
    pub fn encode(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.moduli)
            .rev()
            .fold(0u64, |acc, (&x, &m)| acc * m + x)
    }

    pub fn decode(&self, mut code: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let x = code % m;
                code /= m;
                x
            })
            .collect()
    }

    fn check_enumerable(&self) -> Result<()> {
        let size = self.size();
        if size > ENUMERATION_CAP {
            return Err(Error::TooLarge {
                count: size,
                cap: ENUMERATION_CAP,
            });
        }
        Ok(())
    }

    /// All elements, in code order.
    pub fn elements(&self) -> Result<Vec<Vec<u64>>> {
        self.check_enumerable()?;
        Ok((0..self.size() as u64).map(|c| self.decode(c)).collect())
    }

    /// Left multiplication by `a` is a bijection, which in a finite ring
    /// makes `a` a unit.
    pub fn is_unit(&self, a: &[u64]) -> bool {
        let k = self.dim();
        if k == 0 {
            return true;
        }
        let images: Vec<Vec<u64>> = (0..k).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        let m = self.moduli[0];
        if self.moduli.iter().all(|&x| x == m) {
            return gcd(det_mod(images, m), m) == 1;
        }
        // mixed moduli: the images together with the relations must
        // generate all of Z^k
        let mut rows: Vec<Vec<Z>> = images
            .into_iter()
            .map(|r| r.into_iter().map(Z::from).collect())
            .collect();
        for (i, &m) in self.moduli.iter().enumerate() {
            let mut r = vec![Z::zero(); k];
            r[i] = Z::from(m);
            rows.push(r);
        }
        let h = hermite_normal_form(&ZMatrix::from_rows(&rows, k));
        h.rank() == k && (0..k).all(|i| h.h[(i, i)].is_one())
    }

    /// The additive subgroup generated by `gens`.
    pub fn additive_span(&self, gens: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
        self.check_enumerable()?;
        let mut seen: HashMap<u64, ()> = HashMap::new();
        let zero = self.zero();
        seen.insert(self.encode(&zero), ());
        let mut out = vec![zero];
        let mut i = 0;
        while i < out.len() {
            let x = out[i].clone();
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(self.encode(&y), ()).is_none() {
                    out.push(y);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// The unit group, enumerated.
    pub fn units(&self) -> Result<FiniteUnitGroup> {
        let elements: Vec<Vec<u64>> = self
            .elements()?
            .into_iter()
            .filter(|x| self.is_unit(x))
            .collect();
        Ok(FiniteUnitGroup::new(self.clone(), elements))
    }
}

/// Outer / inner for a pair of graded lattices with inner a two-sided ideal
/// of finite index in the ring outer, on a basis adapted to both.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    ring: FiniteRing,
    /// Adapted outer basis, one vector per coordinate of the quotient.
    lifts: Vec<Vec<Q>>,
    degrees: Vec<i64>,
    /// Full adapted basis of outer, with its moduli (1 for dropped ones).
    adapted: Vec<Vec<Q>>,
    adapted_moduli: Vec<u64>,
    pivots: Vec<usize>,
    pivot_inverse: QMatrix,
}

impl LatticeQuotient {
    pub fn new(a: &GradedAlgebra, outer: &ZLattice, inner: &ZLattice, one: &[Q]) -> Result<Self> {
        let ob = graded_basis(a, outer)?;
        let ib = graded_basis(a, inner)?;
        let n = a.dim();
        let mut adapted = Vec::new();
        let mut adapted_moduli = Vec::new();
        let mut adapted_degrees = Vec::new();
        let mut degs: Vec<i64> = ob.iter().map(|(d, _)| *d).collect();
        degs.sort_unstable();
        degs.dedup();
        for d in degs {
            let od: Vec<Vec<Q>> = ob.iter().filter(|(e, _)| *e == d).map(|(_, v)| v.clone()).collect();
            let id: Vec<Vec<Q>> = ib.iter().filter(|(e, _)| *e == d).map(|(_, v)| v.clone()).collect();
            let k = od.len();
            if id.len() != k {
                return Err(Error::InvalidParameter(
                    "inner lattice is not of finite index in the outer one".into(),
                ));
            }
            let omat = QMatrix::from_rows(&od, n);
            let mut rows = Vec::new();
            for v in &id {
                let c = field::solve_left(&CoefficientRing::Rationals, &omat, v).ok_or_else(|| {
                    Error::InvalidParameter("inner lattice is not contained in the outer one".into())
                })?;
                if !c.iter().all(|x| x.is_integer()) {
                    return Err(Error::InvalidParameter(
                        "inner lattice is not contained in the outer one".into(),
                    ));
                }
                rows.push(c.into_iter().map(|x| x.to_integer()).collect::<Vec<Z>>());
            }
            let snf = smith_normal_form(&ZMatrix::from_rows(&rows, k));
            for i in 0..k {
                let s = snf.s[(i, i)].clone();
                if s.is_zero() {
                    return Err(Error::InvalidParameter(
                        "inner lattice is not of finite index in the outer one".into(),
                    ));
                }
                let m = s.to_u64().ok_or(Error::TooLarge {
                    count: u128::MAX,
                    cap: ENUMERATION_CAP,
                })?;
                let mut v = vec![Q::zero(); n];
                for (j, o) in od.iter().enumerate() {
                    let c = Q::from_integer(snf.v[(i, j)].clone());
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(o) {
                        *x += &c * y;
                    }
                }
                adapted.push(v);
                adapted_moduli.push(m);
                adapted_degrees.push(d);
            }
        }
        let amat = QMatrix::from_rows(&adapted, n);
        let (_, pivots) = field::rref(&CoefficientRing::Rationals, &amat);
        let sub = QMatrix::from_rows(
            &adapted
                .iter()
                .map(|v| pivots.iter().map(|&p| v[p].clone()).collect())
                .collect::<Vec<_>>(),
            pivots.len(),
        );
        let pivot_inverse = field::inverse(&CoefficientRing::Rationals, &sub)
            .ok_or_else(|| Error::InvalidParameter("degenerate outer basis".into()))?;
        let kept: Vec<usize> = (0..adapted.len()).filter(|&i| adapted_moduli[i] > 1).collect();
        let moduli: Vec<u64> = kept.iter().map(|&i| adapted_moduli[i]).collect();
        let lifts: Vec<Vec<Q>> = kept.iter().map(|&i| adapted[i].clone()).collect();
        let degrees = kept.iter().map(|&i| adapted_degrees[i]).collect();
        let mut q = LatticeQuotient {
            ring: FiniteRing {
                moduli: Vec::new(),
                table: Vec::new(),
                one: Vec::new(),
            },
            lifts,
            degrees,
            adapted,
            adapted_moduli,
            pivots,
            pivot_inverse,
        };
        let k = kept.len();
        let mut table = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let p = a.mul(&q.lifts[i], &q.lifts[j]);
                table.push(q.reduce(&p).ok_or_else(|| {
                    Error::InvalidParameter("outer lattice is not closed under products".into())
                })?);
            }
        }
        let one = q
            .reduce(one)
            .ok_or_else(|| Error::InvalidParameter("unit is not in the outer lattice".into()))?;
        q.ring = FiniteRing::new(moduli, table, one)?;
        Ok(q)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Coordinates in the full adapted basis, or None outside its span.
    fn adapted_coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let sub: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.pivot_inverse.left_apply(&sub);
        let mut back = vec![Q::zero(); v.len()];
        for (ci, b) in c.iter().zip(&self.adapted) {
            for (x, y) in back.iter_mut().zip(b) {
                *x += ci * y;
            }
        }
        (back == v).then_some(c)
    }

    /// Residue of an element of the outer lattice.
    pub fn reduce(&self, v: &[Q]) -> Option<Vec<u64>> {
        let c = self.adapted_coords(v)?;
        if !c.iter().all(|x| x.is_integer()) {
            return None;
        }
        let mut out = Vec::new();
        for (x, &m) in c.iter().zip(&self.adapted_moduli) {
            if m > 1 {
                let r = x.to_integer() % Z::from(m);
                let r = if r < Z::zero() { r + Z::from(m) } else { r };
                out.push(r.to_u64().expect("residue"));
            }
        }
        Some(out)
    }

    /// A representative in the outer lattice.
    pub fn lift(&self, x: &[u64]) -> Vec<Q> {
        let n = self.adapted.first().map_or(0, Vec::len);
        let mut v = vec![Q::zero(); n];
        for (c, b) in x.iter().zip(&self.lifts) {
            let c = Q::from_integer(Z::from(*c));
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &c * bi;
            }
        }
        v
    }
}

/// A subgroup of a `FiniteUnitGroup`, by membership.
#[derive(Clone, Debug)]
pub struct Subgroup {
    member: Vec<bool>,
    elements: Vec<usize>,
    gens: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.member[g]
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
}

/// The enumerated unit group of a finite ring.
#[derive(Clone, Debug)]
pub struct FiniteUnitGroup {
    ring: FiniteRing,
    elements: Vec<Vec<u64>>,
    index: HashMap<u64, usize>,
    identity: usize,
    gens: Vec<usize>,
}

impl FiniteUnitGroup {
    fn new(ring: FiniteRing, elements: Vec<Vec<u64>>) -> Self {
        let index: HashMap<u64, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (ring.encode(x), i))
            .collect();
        let identity = index[&ring.encode(ring.one())];
        let mut g = FiniteUnitGroup {
            ring,
            elements,
            index,
            identity,
            gens: Vec::new(),
        };
        g.gens = g.find_generators();
        g
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, i: usize) -> &[u64] {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn index_of(&self, x: &[u64]) -> Option<usize> {
        self.index.get(&self.ring.encode(x)).copied()
    }

    /// A generating set, found greedily in a seeded order.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.ring.mul(&self.elements[a], &self.elements[b]);
        self.index[&self.ring.encode(&p)]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let p = self.ring.pow(&self.elements[a], e);
        self.index[&self.ring.encode(&p)]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.pow(a, self.order() as u64 - 1)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(ab, self.inverse(ba))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut member = vec![false; self.order()];
        member[self.identity] = true;
        Subgroup {
            member,
            elements: vec![self.identity],
            gens: Vec::new(),
        }
    }

    /// The subgroup generated by `sub` and `g`.
    pub fn extend(&self, sub: &Subgroup, g: usize) -> Subgroup {
        if sub.member[g] {
            return sub.clone();
        }
        let mut out = sub.clone();
        out.gens.push(g);
        let mut queue = out.elements.clone();
        while let Some(h) = queue.pop() {
            for &s in &out.gens.clone() {
                let x = self.mul(h, s);
                if !out.member[x] {
                    out.member[x] = true;
                    out.elements.push(x);
                    queue.push(x);
                }
            }
        }
        out
    }

    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        gens.iter()
            .fold(self.trivial_subgroup(), |s, &g| self.extend(&s, g))
    }

    fn find_generators(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(GENERATOR_SEED));
        let mut sub = self.trivial_subgroup();
        for g in order {
            if sub.order() == self.order() {
                break;
            }
            sub = self.extend(&sub, g);
        }
        sub.gens
    }

    /// The smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let mut sub = self.closure(gens);
        loop {
            let mut grown = false;
            for &s in &self.gens {
                let si = self.inverse(s);
                for k in sub.gens.clone() {
                    let c = self.mul(self.mul(s, k), si);
                    if !sub.member[c] {
                        sub = self.extend(&sub, c);
                        grown = true;
                    }
                }
            }
            if !grown {
                return sub;
            }
        }
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut cs = Vec::new();
        for &a in &self.gens {
            for &b in &self.gens {
                cs.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&cs)
    }

    pub fn abelianization(&self) -> FiniteAbelianGroup {
        self.abelian_quotient(&self.commutator_subgroup())
            .expect("quotient by the commutator subgroup is abelian")
    }

    /// G / N for a normal subgroup N containing the commutator subgroup.
    pub fn abelian_quotient(&self, normal: &Subgroup) -> Result<FiniteAbelianGroup> {
        for &a in &self.gens {
            for &b in &self.gens {
                if !normal.member[self.commutator(a, b)] {
                    return Err(Error::InvalidParameter("quotient is not abelian".into()));
                }
            }
        }
        let q = AbelianQuotient::new(self, normal);
        Ok(q.structure())
    }

    /// Labels of the cosets of a normal subgroup.
    pub fn quotient(&self, normal: &Subgroup) -> AbelianQuotient<'_> {
        AbelianQuotient::new(self, normal)
    }
}

/// Cosets of a normal subgroup with abelian quotient.
pub struct AbelianQuotient<'a> {
    group: &'a FiniteUnitGroup,
    label: Vec<usize>,
    reps: Vec<usize>,
}

impl<'a> AbelianQuotient<'a> {
    fn new(group: &'a FiniteUnitGroup, normal: &Subgroup) -> Self {
        let mut label = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        for g in 0..group.order() {
            if label[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &k in &normal.elements {
                label[group.mul(g, k)] = c;
            }
        }
        AbelianQuotient { group, label, reps }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn label(&self, g: usize) -> usize {
        self.label[g]
    }

    pub fn representative(&self, c: usize) -> usize {
        self.reps[c]
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.label[self.group.mul(self.reps[a], self.reps[b])]
    }

    fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.label[self.group.identity];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let one = self.label[self.group.identity];
        let n = self.order() as u64;
        let mut ord = n;
        for (p, _) in factorize(n) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == one {
                ord /= p;
            }
        }
        ord
    }

    /// Invariant factors from counts of elements of p-power order.
    pub fn structure(&self) -> FiniteAbelianGroup {
        let n = self.order() as u64;
        let orders: Vec<u64> = (0..self.order()).map(|a| self.element_order(a)).collect();
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (p, emax) in factorize(n) {
            // a[k] = log_p #{x : x^(p^k) = 1}
            let mut logs = vec![0u32];
            for k in 1..=emax {
                let pk = p.pow(k);
                let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let mut l = 0;
                let mut c = count;
                while c > 1 {
                    c /= p;
                    l += 1;
                }
                logs.push(l);
            }
            // factors of exponent at least k: logs[k] - logs[k - 1]
            let at_least: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
            let mut es = Vec::new();
            for k in 0..at_least.len() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..at_least[k] - next {
                    es.push(k as u32 + 1);
                }
            }
            parts.insert(p, es);
        }
        FiniteAbelianGroup::from_prime_powers(parts)
    }
}
