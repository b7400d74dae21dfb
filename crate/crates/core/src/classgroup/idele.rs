//! Ideles, the lattices they cut out, and freeness of rank-one lattices.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::conductor::{classical_maximal_order, ReducedNormClassGroup};
use crate::error::{Error, Result};
use crate::linalg::{field, integer_kernel, is_zero_vec, QMatrix, ZLattice, ZMatrix};
use crate::orders::{globalize, localize, DgOrder, LocalLattice};
use crate::ring::{common_denominator, CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

/// Number of candidates tried by the generator search.
pub const SEARCH_CAP: u64 = 20_000;

/// Finitely many local components alpha_p, with component 1 at every other
/// prime. A dg idele has homogeneous degree-0 cycles as components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idele {
    components: BTreeMap<u64, Vec<Q>>,
    dg: bool,
}

impl Idele {
    pub fn new(components: BTreeMap<u64, Vec<Q>>, dg: bool) -> Self {
        Idele { components, dg }
    }

    pub fn trivial(dg: bool) -> Self {
        Idele::new(BTreeMap::new(), dg)
    }

    /// The same element z at each of the given primes.
    pub fn principal(primes: &[u64], z: &[Q], dg: bool) -> Self {
        Idele::new(primes.iter().map(|&p| (p, z.to_vec())).collect(), dg)
    }

    pub fn components(&self) -> &BTreeMap<u64, Vec<Q>> {
        &self.components
    }

    pub fn component(&self, p: u64) -> Option<&[Q]> {
        self.components.get(&p).map(Vec::as_slice)
    }

    pub fn is_dg(&self) -> bool {
        self.dg
    }

    /// Componentwise product alpha * beta.
    pub fn mul(&self, order: &DgOrder, other: &Idele) -> Idele {
        let a = &order.algebra().algebra;
        let mut out = self.components.clone();
        for (&p, y) in &other.components {
            let z = match out.get(&p) {
                Some(x) => a.mul(x, y),
                None => y.clone(),
            };
            out.insert(p, z);
        }
        Idele::new(out, self.dg && other.dg)
    }

    /// Forgets the dg condition.
    pub fn classical(&self) -> Idele {
        Idele::new(self.components.clone(), false)
    }
}

/// A lattice L in A with Lambda L in L.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalDgIdeal {
    pub lattice: ZLattice,
    pub idele: Option<Idele>,
    /// D(L) in L.
    pub dg_stable: bool,
    /// Locally free of rank one, known from the idele.
    pub locally_free: bool,
}

impl FractionalDgIdeal {
    /// [Lambda : L] as covol(L) / covol(Lambda).
    pub fn index(&self, order: &DgOrder) -> Result<Q> {
        order.lattice().index_of(&self.lattice)
    }
}

/// Lattice spanned by the rows x * z for x in the basis.
fn right_translate(order: &DgOrder, z: &[Q]) -> Result<ZLattice> {
    let a = &order.algebra().algebra;
    let rows: Vec<Vec<Q>> = order.basis().iter().map(|b| a.mul(b, z)).collect();
    ZLattice::from_generators(a.dim(), &rows)
}

/// |det| of x -> x z on Lambda, in order coordinates.
fn right_det(order: &DgOrder, z: &[Q]) -> Q {
    let a = &order.algebra().algebra;
    let rows: Vec<Vec<Q>> = order
        .basis()
        .iter()
        .map(|b| order.rational_coords(&a.mul(b, z)))
        .collect();
    field::det(&QQ, &QMatrix::from_rows(&rows, order.dim())).abs()
}

fn check_component(order: &DgOrder, p: u64, x: &[Q], dg: bool) -> Result<()> {
    let a = &order.algebra().algebra;
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    if field::det(&QQ, &a.left_mult_matrix(x)).is_zero() {
        return Err(Error::NonUnitComponent(p));
    }
    if dg {
        let ok = (a.homogeneous_degree(x) == Some(0)) && is_zero_vec(&order.algebra().d(x));
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "component at p = {p} is not a degree-0 cycle"
            )));
        }
    }
    Ok(())
}

fn is_d_stable(order: &DgOrder, l: &ZLattice) -> bool {
    l.basis().iter().all(|v| l.contains(&order.algebra().d(v)))
}

/// Lambda alpha = A cap (intersection over p of Lambda_p alpha_p).
pub fn ideal_from_idele(order: &DgOrder, idele: &Idele) -> Result<FractionalDgIdeal> {
    let mut local: Vec<LocalLattice> = Vec::new();
    for (&p, x) in idele.components() {
        check_component(order, p, x, idele.is_dg())?;
        local.push(localize(&right_translate(order, x)?, p)?);
    }
    let lattice = globalize(&local, order.lattice())?;
    let dg_stable = is_d_stable(order, &lattice);
    if idele.is_dg() && !dg_stable {
        return Err(Error::NotDgLattice);
    }
    Ok(FractionalDgIdeal {
        lattice,
        idele: Some(idele.clone()),
        dg_stable,
        locally_free: true,
    })
}

/// Why a lattice is not free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotFreeCertificate {
    /// The candidate lattice has rank at most one and every candidate failed.
    Exhausted { candidates: u64 },
    /// The reduced norms of the idele give a nontrivial class modulo f.
    ReducedNormClass { modulus: u64, residues: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free { generator: Vec<Q> },
    NotFree(NotFreeCertificate),
    /// No generator among the searched candidates and no obstruction found.
    Undetermined { searched: u64, class_trivial: bool },
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        matches!(self, Freeness::Free { .. })
    }
}

/// Elements of the lattice spanned by `basis` on which `conditions`
/// vanishes, as a basis of that sublattice.
pub(crate) fn constrained_sublattice(
    basis: &[Vec<Q>],
    conditions: impl Fn(&[Q]) -> Vec<Q>,
) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = basis.iter().map(|b| conditions(b)).collect();
    let k = basis.len();
    let m = rows.first().map_or(0, Vec::len);
    if m == 0 {
        return basis.to_vec();
    }
    let den = common_denominator(rows.iter().flatten());
    let cols: Vec<Vec<Z>> = (0..m)
        .map(|j| {
            rows.iter()
                .map(|r| (&r[j] * Q::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    integer_kernel(&ZMatrix::from_rows(&cols, k))
        .into_iter()
        .map(|c| combine(basis, &c))
        .collect()
}

pub(crate) fn combine(basis: &[Vec<Q>], c: &[Z]) -> Vec<Q> {
    let n = basis.first().map_or(0, Vec::len);
    let mut v = vec![Q::zero(); n];
    for (b, x) in basis.iter().zip(c) {
        if x.is_zero() {
            continue;
        }
        let x = Q::from_integer(x.clone());
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += &x * bi;
        }
    }
    v
}

/// Homogeneous degree-0 cycles in the lattice, as a basis.
pub fn degree_zero_cycles(order: &DgOrder, l: &ZLattice) -> Vec<Vec<Q>> {
    let dg = order.algebra();
    let a = &dg.algebra;
    constrained_sublattice(&l.basis(), |v| {
        let mut c = dg.d(v);
        c.extend((0..a.dim()).filter(|&i| a.degree(i) != 0).map(|i| v[i].clone()));
        c
    })
}

/// All integer vectors with entries in [-bound, bound], in order of
/// increasing maximum norm.
pub(crate) fn box_vectors(rank: usize, bound: i64) -> Vec<Vec<Z>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|v| v.iter().map(|x| x.abs()).max().unwrap_or(0));
    out.into_iter()
        .map(|v| v.into_iter().map(Z::from).collect())
        .collect()
}

fn search_bound(rank: usize) -> i64 {
    let mut b = 1i64;
    while (2 * (b + 1) + 1).checked_pow(rank as u32).is_some_and(|n| n as u64 <= SEARCH_CAP) {
        b += 1;
    }
    b
}

/// Searches for a degree-0 cycle z in L with Lambda z = L. A rank-one
/// candidate lattice is searched exhaustively; otherwise a failed search
/// falls back on the reduced-norm class of the idele modulo the conductor
/// of a classical maximal order.
pub fn is_free_rank_one(order: &DgOrder, ideal: &FractionalDgIdeal) -> Result<Freeness> {
    let index = ideal.index(order)?;
    let candidates = degree_zero_cycles(order, &ideal.lattice);
    let r = candidates.len();
    let is_generator = |z: &[Q]| right_det(order, z) == index;
    if r <= 1 {
        if let Some(g) = candidates.first() {
            if is_generator(g) {
                return Ok(Freeness::Free { generator: g.clone() });
            }
        }
        return Ok(Freeness::NotFree(NotFreeCertificate::Exhausted { candidates: r as u64 }));
    }
    let bound = search_bound(r);
    let mut searched = 0u64;
    for c in box_vectors(r, bound) {
        searched += 1;
        let z = combine(&candidates, &c);
        if !is_zero_vec(&z) && is_generator(&z) {
            return Ok(Freeness::Free { generator: z });
        }
    }
    let idele = ideal
        .idele
        .as_ref()
        .ok_or_else(|| Error::ConductorNotComputed("the lattice has no idele".into()))?;
    let gamma = classical_maximal_order(order).map_err(|e| Error::ConductorNotComputed(e.to_string()))?;
    let group = ReducedNormClassGroup::new(order, &gamma)?;
    let (residues, trivial) = group.class_of(idele)?;
    if trivial {
        Ok(Freeness::Undetermined {
            searched,
            class_trivial: true,
        })
    } else {
        Ok(Freeness::NotFree(NotFreeCertificate::ReducedNormClass {
            modulus: group.conductor(),
            residues,
        }))
    }
}

/// Index bookkeeping for alpha, beta and alpha beta.
#[derive(Clone, Debug, PartialEq)]
pub struct IdeleSequenceReport {
    pub index_alpha: Q,
    pub index_beta: Q,
    pub index_product: Q,
    /// All three lattices are full Lambda-lattices.
    pub ranks_match: bool,
    /// index(alpha beta) * index(Lambda) = index(alpha) * index(beta).
    pub holds: bool,
}

pub fn idele_sequence_check(order: &DgOrder, alpha: &Idele, beta: &Idele) -> Result<IdeleSequenceReport> {
    let la = ideal_from_idele(order, alpha)?;
    let lb = ideal_from_idele(order, beta)?;
    let lab = ideal_from_idele(order, &alpha.mul(order, beta))?;
    let ranks_match = [&la, &lb, &lab].iter().all(|l| {
        l.lattice.is_full()
            && order
                .basis()
                .iter()
                .all(|x| l.lattice.basis().iter().all(|y| l.lattice.contains(&order.algebra().mul(x, y))))
    });
    let (ia, ib, iab) = (la.index(order)?, lb.index(order)?, lab.index(order)?);
    Ok(IdeleSequenceReport {
        holds: ranks_match && iab == &ia * &ib,
        index_alpha: ia,
        index_beta: ib,
        index_product: iab,
        ranks_match,
    })
}

/// Comparison of the units of Lambda that are cycles with the units of the
/// cycle order, over the cycles in a coefficient box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCycleReport {
    pub checked: u64,
    pub units: u64,
    /// Cycles where the two unit tests disagree.
    pub mismatches: u64,
}

impl UnitCycleReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

/// ker(D) cap Lambda^x against (ker(D) cap Lambda)^x: z is a unit of
/// Lambda iff x -> z x has determinant +-1 on Lambda, and a unit of the
/// cycle order iff the same holds on the cycle order.
pub fn unit_cycle_identity(order: &DgOrder, bound: i64) -> Result<UnitCycleReport> {
    let dg = order.algebra();
    let a = &dg.algebra;
    let cycles = super::conductor::cycle_order_basis(order);
    let cmat = QMatrix::from_rows(&cycles, a.dim());
    let unit_on = |basis: &[Vec<Q>], coords: &dyn Fn(&[Q]) -> Option<Vec<Q>>, z: &[Q]| -> Result<bool> {
        let rows: Vec<Vec<Q>> = basis
            .iter()
            .map(|b| coords(&a.mul(z, b)).ok_or(Error::NotAnOrder("not closed".into())))
            .collect::<Result<_>>()?;
        Ok(field::det(&QQ, &QMatrix::from_rows(&rows, basis.len())).abs().is_one())
    };
    let order_coords = |v: &[Q]| Some(order.rational_coords(v));
    let cycle_coords = |v: &[Q]| field::solve_left(&QQ, &cmat, v);
    let mut report = UnitCycleReport {
        checked: 0,
        units: 0,
        mismatches: 0,
    };
    for c in box_vectors(cycles.len(), bound) {
        let z = combine(&cycles, &c);
        let in_lambda = unit_on(order.basis(), &order_coords, &z)?;
        let in_cycles = unit_on(&cycles, &cycle_coords, &z)?;
        report.checked += 1;
        report.units += u64::from(in_cycles);
        report.mismatches += u64::from(in_lambda != in_cycles);
    }
    Ok(report)
}
