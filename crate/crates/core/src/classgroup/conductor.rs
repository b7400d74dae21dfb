//! Class groups through the conductor square
//!
//!   Lambda   ->  Gamma
//!     |            |
//!   Lambda/fGamma -> Gamma/fGamma
//!
//! for a classical maximal order Gamma with trivial class group and an
//! integer conductor f with f Gamma in Lambda.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::finite::{FiniteAbelianGroup, FiniteRing, FiniteUnitGroup, LatticeQuotient, Subgroup};
use super::idele::Idele;
use crate::error::{Error, Result};
use crate::graded::{central_idempotents, DgAlgebra, GradedAlgebra};
use crate::linalg::{integer_kernel, is_zero_vec, smith_normal_form, ZLattice, ZMatrix};
use crate::orders::{dg_maximal_hull, is_dg_order, DgOrder, ReducedTrace};
use crate::ring::{mod_inverse, valuation, Q, Z};

pub const UPPER_BOUND_CAVEAT: &str =
    "upper bound: idele classes of the cycle order surject onto the dg class group";
pub const FINITENESS_CAVEAT: &str = "finiteness of dg class groups is not known in general";
pub const GLOBAL_UNITS_CAVEAT: &str =
    "global units are represented by signs, reflections and transvections visible on the basis";
pub const EICHLER_CAVEAT: &str = "the Eichler condition is assumed, not verified";

/// Result of a conductor-square computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassGroupReport {
    pub group: FiniteAbelianGroup,
    pub conductor: u64,
    /// Order of the unit group of Gamma / f Gamma.
    pub unit_group_order: usize,
    /// Order of the subgroup generated by commutators and the images of
    /// the units of Lambda / f Gamma and of Gamma.
    pub killed_order: usize,
    pub caveats: Vec<String>,
}

impl ClassGroupReport {
    fn trivial(caveats: Vec<String>) -> Self {
        ClassGroupReport {
            group: FiniteAbelianGroup::trivial(),
            conductor: 1,
            unit_group_order: 1,
            killed_order: 1,
            caveats,
        }
    }
}

/// The least positive integer f with f * outer in inner.
pub fn conductor(outer: &ZLattice, inner: &ZLattice) -> Result<u64> {
    if !outer.contains_lattice(inner) {
        return Err(Error::InvalidParameter("the order is not contained in the maximal order".into()));
    }
    let rows: Vec<Vec<Z>> = inner
        .basis()
        .iter()
        .map(|v| outer.coords(v).expect("contained"))
        .collect();
    let k = outer.rank();
    if rows.len() != k {
        return Err(Error::NotFull);
    }
    let snf = smith_normal_form(&ZMatrix::from_rows(&rows, k));
    let f = snf
        .invariant_factors()
        .into_iter()
        .max()
        .unwrap_or_else(Z::one);
    f.to_u64().ok_or(Error::TooLarge {
        count: u128::MAX,
        cap: super::finite::ENUMERATION_CAP,
    })
}

/// Units -1, 1 - 2e for central idempotents e of the corner, 1 - 2b for
/// idempotent basis vectors and 1 + b for square-zero basis vectors, all of
/// degree 0 and, when a differential is given, cycles.
pub fn visible_units(
    a: &GradedAlgebra,
    basis: &[Vec<Q>],
    one: &[Q],
    dg: Option<&DgAlgebra>,
    contains: impl Fn(&[Q]) -> bool,
) -> Result<Vec<Vec<Q>>> {
    let two = Q::from_integer(Z::from(2));
    let is_cycle = |v: &[Q]| dg.is_none_or(|d| is_zero_vec(&d.d(v)));
    let mut out = vec![a.scale(&-Q::one(), one)];
    for e in central_idempotents(a)?.all() {
        if a.mul(&e, one) != e || is_zero_vec(&e) {
            continue;
        }
        let u = a.sub(one, &a.scale(&two, &e));
        if contains(&u) && is_cycle(&u) {
            out.push(u);
        }
    }
    for b in basis {
        if a.homogeneous_degree(b) != Some(0) || !is_cycle(b) || is_zero_vec(b) {
            continue;
        }
        let sq = a.mul(b, b);
        if &sq == b {
            out.push(a.sub(one, &a.scale(&two, b)));
        } else if is_zero_vec(&sq) {
            out.push(a.add(one, b));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A classical maximal order containing the order, found by the hull
/// search for the zero differential on the ungraded algebra.
pub fn classical_maximal_order(order: &DgOrder) -> Result<DgOrder> {
    let plain = DgAlgebra::trivial(order.algebra().algebra.ungraded());
    let o = is_dg_order(&plain, order.lattice())?;
    let hull = dg_maximal_hull(&o)?;
    if !hull.classically_maximal {
        return Err(Error::UnsupportedConductor(format!(
            "no classical maximal order found (discriminant {})",
            hull.discriminant
        )));
    }
    Ok(hull.order)
}

/// Finite data of a conductor square.
pub struct ConductorSquare {
    pub conductor: u64,
    pub quotient: Option<LatticeQuotient>,
    pub units: Option<FiniteUnitGroup>,
    pub lambda_units: Vec<usize>,
    pub global_units: Vec<usize>,
}

impl ConductorSquare {
    /// Builds Gamma / f Gamma, its unit group, the units of Lambda / f Gamma
    /// and the residues of the given global units of Gamma.
    pub fn new(a: &GradedAlgebra, lambda: &ZLattice, gamma: &ZLattice, global: &[Vec<Q>]) -> Result<Self> {
        let f = conductor(gamma, lambda)?;
        if f == 1 {
            return Ok(ConductorSquare {
                conductor: 1,
                quotient: None,
                units: None,
                lambda_units: Vec::new(),
                global_units: Vec::new(),
            });
        }
        let fq = Q::from_integer(Z::from(f));
        let quotient = LatticeQuotient::new(a, gamma, &gamma.scale(&fq), a.unit())?;
        let ring = quotient.ring();
        let units = ring.units()?;
        let gens: Vec<Vec<u64>> = lambda
            .basis()
            .iter()
            .map(|v| quotient.reduce(v).expect("lambda in gamma"))
            .collect();
        let lambda_units = ring
            .additive_span(&gens)?
            .into_iter()
            .filter_map(|x| units.index_of(&x))
            .collect();
        let global_units = global
            .iter()
            .map(|u| {
                quotient
                    .reduce(u)
                    .and_then(|x| units.index_of(&x))
                    .ok_or_else(|| Error::InvalidParameter("global unit does not reduce to a unit".into()))
            })
            .collect::<Result<_>>()?;
        Ok(ConductorSquare {
            conductor: f,
            quotient: Some(quotient),
            units: Some(units),
            lambda_units,
            global_units,
        })
    }

    /// Commutators together with the images of the units of Lambda and
    /// Gamma, as a normal subgroup.
    pub fn killed(&self) -> Option<Subgroup> {
        let g = self.units.as_ref()?;
        let mut gens: Vec<usize> = Vec::new();
        for &a in g.generators() {
            for &b in g.generators() {
                gens.push(g.commutator(a, b));
            }
        }
        gens.extend(&self.lambda_units);
        gens.extend(&self.global_units);
        Some(g.normal_closure(&gens))
    }

    pub fn report(&self, caveats: Vec<String>) -> Result<ClassGroupReport> {
        let (Some(g), Some(k)) = (self.units.as_ref(), self.killed()) else {
            return Ok(ClassGroupReport::trivial(caveats));
        };
        Ok(ClassGroupReport {
            group: g.abelian_quotient(&k)?,
            conductor: self.conductor,
            unit_group_order: g.order(),
            killed_order: k.order(),
            caveats,
        })
    }
}

/// Cl(Lambda) as the abelianized units of Gamma / f Gamma modulo the units
/// of Lambda / f Gamma and the global units of Gamma. The class group of
/// Gamma is assumed trivial.
pub fn class_group_conductor_square(lambda: &DgOrder, gamma: &DgOrder) -> Result<ClassGroupReport> {
    if !gamma.is_classically_maximal()? {
        return Err(Error::UnsupportedConductor("the outer order is not classically maximal".into()));
    }
    let a = gamma.algebra().algebra.ungraded();
    if a != lambda.algebra().algebra.ungraded() {
        return Err(Error::InvalidParameter("orders live in different algebras".into()));
    }
    let global = visible_units(&a, gamma.basis(), a.unit(), None, |v| gamma.contains(v))?;
    let square = ConductorSquare::new(&a, lambda.lattice(), gamma.lattice(), &global)?;
    square.report(vec![GLOBAL_UNITS_CAVEAT.into(), EICHLER_CAVEAT.into()])
}

/// Reduced norm of x in each central simple block, by Newton's identities
/// from the reduced traces of the powers of x.
pub fn reduced_norms(a: &GradedAlgebra, trd: &ReducedTrace, x: &[Q]) -> Vec<Q> {
    trd.blocks()
        .iter()
        .map(|(e, n)| {
            let n = *n as usize;
            let xe = a.mul(x, e);
            let mut power = e.clone();
            let mut p = Vec::with_capacity(n);
            for _ in 0..n {
                power = a.mul(&power, &xe);
                let m = a.left_mult_matrix(&power);
                let tr = (0..m.rows()).fold(Q::zero(), |acc, i| acc + &m[(i, i)]);
                p.push(tr / Q::from_integer(Z::from(n)));
            }
            let mut el = vec![Q::one()];
            for k in 1..=n {
                let mut s = Q::zero();
                for i in 1..=k {
                    let term = &el[k - i] * &p[i - 1];
                    if i % 2 == 1 {
                        s += term;
                    } else {
                        s -= term;
                    }
                }
                el.push(s / Q::from_integer(Z::from(k)));
            }
            el.pop().expect("nonempty")
        })
        .collect()
}

/// The unit u of Z_l with u = x / l^v(x), reduced modulo l^k.
fn unit_residue(x: &Q, l: u64, k: u32) -> Z {
    let m = Z::from(l).pow(k);
    let v = valuation(x, l);
    let lz = Q::from_integer(Z::from(l));
    let u = if v >= 0 {
        x / lz.pow(v as i32)
    } else {
        x * lz.pow((-v) as i32)
    };
    let den = mod_inverse(u.denom(), &m).expect("unit denominator");
    (u.numer() * den).mod_floor_pos(&m)
}

trait ModFloorPos {
    fn mod_floor_pos(&self, m: &Z) -> Z;
}

impl ModFloorPos for Z {
    fn mod_floor_pos(&self, m: &Z) -> Z {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Chinese remaindering of residues modulo pairwise coprime moduli.
fn crt(parts: &[(Z, Z)]) -> Z {
    let mut x = Z::zero();
    let mut m = Z::one();
    for (r, mi) in parts {
        let t = ((r - &x) * mod_inverse(&m, mi).expect("coprime")).mod_floor_pos(mi);
        x += &m * t;
        m *= mi;
    }
    x
}

/// Cl(Lambda) through reduced norms: prod over blocks of (Z/f)^x modulo
/// the signs and the reduced norms of the units of Lambda / f Gamma. For
/// orders with f Gamma in Lambda in split algebras this agrees with the
/// conductor-square group, and it assigns classes to ideles.
pub struct ReducedNormClassGroup {
    trd: ReducedTrace,
    algebra: GradedAlgebra,
    conductor: u64,
    data: Option<(FiniteUnitGroup, Subgroup)>,
}

impl ReducedNormClassGroup {
    pub fn new(lambda: &DgOrder, gamma: &DgOrder) -> Result<Self> {
        let a = gamma.algebra().algebra.ungraded();
        let trd = ReducedTrace::new(&a)?;
        let square = ConductorSquare::new(&a, lambda.lattice(), gamma.lattice(), &[])?;
        let f = square.conductor;
        let r = trd.blocks().len();
        if f == 1 {
            return Ok(ReducedNormClassGroup {
                trd,
                algebra: a,
                conductor: 1,
                data: None,
            });
        }
        let ring = FiniteRing::diagonal(f, r)?;
        let units = ring.units()?;
        let mut gens = Vec::new();
        for b in 0..r {
            let mut s = vec![1u64; r];
            s[b] = f - 1;
            gens.push(units.index_of(&s).expect("sign"));
        }
        let (quotient, g) = (square.quotient.as_ref().expect("f > 1"), square.units.as_ref().expect("f > 1"));
        for &i in &square.lambda_units {
            let x = quotient.lift(g.element(i));
            let norms: Vec<Z> = reduced_norms(&a, &trd, &x)
                .into_iter()
                .map(|n| n.to_integer())
                .collect();
            let res = ring.from_integers(&norms);
            gens.push(units.index_of(&res).ok_or(Error::NotUnit)?);
        }
        let killed = units.closure(&gens);
        Ok(ReducedNormClassGroup {
            trd,
            algebra: a,
            conductor: f,
            data: Some((units, killed)),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn group(&self) -> FiniteAbelianGroup {
        match &self.data {
            None => FiniteAbelianGroup::trivial(),
            Some((units, killed)) => units.abelian_quotient(killed).expect("abelian"),
        }
    }

    /// Residues in prod (Z/f)^x of the reduced norms of an idele, after
    /// dividing by the positive rational with the same valuations; the
    /// flag is true when the class is trivial.
    pub fn class_of(&self, idele: &Idele) -> Result<(Vec<u64>, bool)> {
        let Some((units, killed)) = &self.data else {
            return Ok((Vec::new(), true));
        };
        let f = self.conductor;
        let r = self.trd.blocks().len();
        let mut norms: BTreeMap<u64, Vec<Q>> = BTreeMap::new();
        for (&p, x) in idele.components() {
            let ns = reduced_norms(&self.algebra, &self.trd, x);
            if ns.iter().any(Zero::is_zero) {
                return Err(Error::NonUnitComponent(p));
            }
            norms.insert(p, ns);
        }
        let primes = super::finite::factorize(f);
        let mut residues = Vec::with_capacity(r);
        for b in 0..r {
            let mut scale = Q::one();
            for (&p, ns) in &norms {
                let v = valuation(&ns[b], p);
                let pq = Q::from_integer(Z::from(p));
                scale *= if v >= 0 { pq.pow(v as i32) } else { Q::one() / pq.pow((-v) as i32) };
            }
            let parts: Vec<(Z, Z)> = primes
                .iter()
                .map(|&(l, k)| {
                    let w = match norms.get(&l) {
                        Some(ns) => &ns[b] / &scale,
                        None => Q::one() / &scale,
                    };
                    (unit_residue(&w, l, k), Z::from(l).pow(k))
                })
                .collect();
            residues.push(crt(&parts).to_u64().expect("residue below f"));
        }
        let i = units.index_of(&residues).ok_or(Error::NotUnit)?;
        Ok((residues, killed.contains(i)))
    }
}

/// Pic of an order C in Q^r with maximal order Z^r: (Z/f)^x r modulo
/// signs and the units of C / f.
pub struct SplitPicard {
    rank: usize,
    conductor: u64,
    data: Option<(FiniteRing, FiniteUnitGroup, Subgroup)>,
}

impl SplitPicard {
    /// C given by integral generators.
    pub fn new(gens: &[Vec<Z>], r: usize) -> Result<Self> {
        let lat = ZLattice::from_integer_rows(r, gens);
        let f = conductor(&ZLattice::standard(r), &lat)?;
        if f == 1 {
            return Ok(SplitPicard {
                rank: r,
                conductor: 1,
                data: None,
            });
        }
        let ring = FiniteRing::diagonal(f, r)?;
        let units = ring.units()?;
        let residues: Vec<Vec<u64>> = gens.iter().map(|g| ring.from_integers(g)).collect();
        let mut killed: Vec<usize> = ring
            .additive_span(&residues)?
            .into_iter()
            .filter_map(|x| units.index_of(&x))
            .collect();
        for b in 0..r {
            let mut s = vec![1u64; r];
            s[b] = f - 1;
            killed.push(units.index_of(&s).expect("sign"));
        }
        let k = units.closure(&killed);
        Ok(SplitPicard {
            rank: r,
            conductor: f,
            data: Some((ring, units, k)),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn group(&self) -> FiniteAbelianGroup {
        match &self.data {
            None => FiniteAbelianGroup::trivial(),
            Some((_, units, k)) => units.abelian_quotient(k).expect("abelian"),
        }
    }

    /// Class of an invertible C-lattice M in Q^r given by generators: M is
    /// scaled into Z^r with Z^r M = Z^r, and the class is that of a unit of
    /// Z^r / f generating M / f Z^r. Returns the unit and whether the class
    /// is trivial.
    pub fn class_of(&self, gens: &[Vec<Q>]) -> Result<(Vec<u64>, bool)> {
        let r = self.rank;
        let mut scaled: Vec<Vec<Z>> = gens.iter().map(|_| Vec::with_capacity(r)).collect();
        for b in 0..r {
            let mut g = Q::zero();
            for v in gens {
                g = rational_gcd(&g, &v[b]);
            }
            if g.is_zero() {
                return Err(Error::InvalidParameter("the lattice is not of full rank".into()));
            }
            for (s, v) in scaled.iter_mut().zip(gens) {
                s.push((&v[b] / &g).to_integer());
            }
        }
        let Some((ring, units, killed)) = &self.data else {
            return Ok((Vec::new(), true));
        };
        let residues: Vec<Vec<u64>> = scaled.iter().map(|g| ring.from_integers(g)).collect();
        let unit = ring
            .additive_span(&residues)?
            .into_iter()
            .find_map(|x| units.index_of(&x))
            .ok_or(Error::NotUnit)?;
        Ok((units.element(unit).to_vec(), killed.contains(unit)))
    }
}

fn rational_gcd(a: &Q, b: &Q) -> Q {
    use num_integer::Integer;
    let den = a.denom().lcm(b.denom());
    let x = (a * Q::from_integer(den.clone())).to_integer();
    let y = (b * Q::from_integer(den.clone())).to_integer();
    Q::new(x.gcd(&y), den)
}

/// The class group of an order C in Q^r given by integral generators,
/// with its conductor in Z^r.
pub fn split_commutative_class_group(gens: &[Vec<Z>], r: usize) -> Result<(FiniteAbelianGroup, u64)> {
    let pic = SplitPicard::new(gens, r)?;
    Ok((pic.group(), pic.conductor()))
}

/// How the dg class group bound was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleOrderKind {
    /// Commutative cycle order, reduced modulo nilpotents to an order in Q^r.
    Commutative { reduced_rank: usize },
    /// Zero differential and trivial grading: the classical class group.
    Classical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DgClassGroupReport {
    /// Idele class group of the cycle order.
    pub upper_bound: FiniteAbelianGroup,
    /// The dg class group itself, claimed only when the bound is trivial.
    pub exact: Option<FiniteAbelianGroup>,
    pub conductor: u64,
    pub cycle_rank: usize,
    pub kind: CycleOrderKind,
    pub caveats: Vec<String>,
}

/// Basis (in A) of the cycle order ker(D) of the order.
pub fn cycle_order_basis(order: &DgOrder) -> Vec<Vec<Q>> {
    let za = order.integral_algebra();
    let d = za
        .differential
        .matrix()
        .map(|x| x.to_integer());
    integer_kernel(&d)
        .iter()
        .map(|c| order.element(c))
        .collect()
}

/// The idele class group of the cycle order ker(D) of the order, an upper
/// bound for the dg class group.
pub fn dg_idele_class_group(order: &DgOrder) -> Result<DgClassGroupReport> {
    let dg = order.algebra();
    let a = &dg.algebra;
    let caveats = vec![UPPER_BOUND_CAVEAT.to_string(), FINITENESS_CAVEAT.to_string()];
    let cycles = cycle_order_basis(order);
    let commutative = cycles
        .iter()
        .all(|x| cycles.iter().all(|y| a.mul(x, y) == a.mul(y, x)));
    if !commutative {
        if dg.differential.is_zero() && a.degrees().iter().all(|&d| d == 0) {
            let gamma = classical_maximal_order(order)?;
            let rep = class_group_conductor_square(order, &gamma)?;
            let mut cv = caveats;
            cv.extend(rep.caveats);
            let exact = Some(rep.group.clone());
            return Ok(DgClassGroupReport {
                upper_bound: rep.group,
                exact,
                conductor: rep.conductor,
                cycle_rank: cycles.len(),
                kind: CycleOrderKind::Classical,
                caveats: cv,
            });
        }
        return Err(Error::UnsupportedCycleOrder("the cycle order is not commutative".into()));
    }
    let (chi, r) = split_characters(a, &cycles)?;
    let images: Vec<Vec<Z>> = cycles
        .iter()
        .map(|c| {
            let v = chi(c);
            if v.iter().all(|x| x.is_integer()) {
                Ok(v.into_iter().map(|x| x.to_integer()).collect())
            } else {
                Err(Error::InvalidParameter("cycle order is not integral".into()))
            }
        })
        .collect::<Result<_>>()?;
    let (group, f) = split_commutative_class_group(&images, r)?;
    let exact = group.is_trivial().then(FiniteAbelianGroup::trivial);
    Ok(DgClassGroupReport {
        upper_bound: group,
        exact,
        conductor: f,
        cycle_rank: cycles.len(),
        kind: CycleOrderKind::Commutative { reduced_rank: r },
        caveats,
    })
}

type Character<'a> = Box<dyn Fn(&[Q]) -> Vec<Q> + 'a>;

/// For a commutative subalgebra spanned by `span` whose reduction modulo
/// nilpotents is Q^r, the map to Q^r sending x to its eigenvalue on each
/// primitive idempotent, x e = c e + nilpotent.
pub(crate) fn split_characters<'a>(a: &'a GradedAlgebra, span: &[Vec<Q>]) -> Result<(Character<'a>, usize)> {
    let basis = a.graded_span(span)?.basis().to_vec();
    let names = (0..basis.len()).map(|i| format!("z{i}")).collect();
    let (sub, emb) = a.subalgebra(&basis, names)?;
    let ci = central_idempotents(&sub)?;
    let rad = crate::graded::jacobson_radical(&sub)?;
    let r = ci.primitive.len();
    if !ci.split || sub.dim() - rad.dim() != r {
        return Err(Error::UnsupportedCycleOrder("the reduced cycle algebra is not split".into()));
    }
    let idems: Vec<Vec<Q>> = ci.primitive.iter().map(|e| emb.left_apply(e)).collect();
    let trace = |v: &[Q]| {
        let m = a.left_mult_matrix(v);
        (0..m.rows()).fold(Q::zero(), |acc, i| acc + &m[(i, i)])
    };
    let norms: Vec<Q> = idems.iter().map(|e| trace(e)).collect();
    let chi = move |x: &[Q]| -> Vec<Q> {
        idems
            .iter()
            .zip(&norms)
            .map(|(e, t)| trace(&a.mul(x, e)) / t)
            .collect()
    };
    Ok((Box::new(chi), r))
}
