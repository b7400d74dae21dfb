//! dg-orders: full lattices in rational dg-algebras that are unital
//! subrings stable under the differential.

mod hull;
mod local;
mod module_lattice;

pub use hull::{dg_maximal_hull, p_radical, HullMove, HullReport, MoveSide};
pub use local::{globalize, localize, modified_primes, LocalLattice};
pub use module_lattice::{dg_lattice_in_module, is_dg_lattice};

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graded::{center_degree_zero, central_idempotents, DgAlgebra, GradedAlgebra};
use crate::homology::{algebra_homology, HomologyPresentation};
use crate::linalg::{field, rational_solutions, integral_solutions, QMatrix, ZLattice};
use crate::report::format_vector;
use crate::ring::{CoefficientRing, Q, Z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderCheck {
    FullRank,
    Grading,
    Unit,
    RingClosure,
    DStability,
    Integrality,
}

impl OrderCheck {
    pub fn name(&self) -> &'static str {
        match self {
            OrderCheck::FullRank => "full rank",
            OrderCheck::Grading => "grading",
            OrderCheck::Unit => "unit",
            OrderCheck::RingClosure => "ring closure",
            OrderCheck::DStability => "d-stability",
            OrderCheck::Integrality => "integrality",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCheckResult {
    pub check: OrderCheck,
    /// A description of a violation; `None` when the check passes.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub checks: Vec<OrderCheckResult>,
    /// Homology over Z is torsion-free; only computed for orders.
    pub proper: Option<bool>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.witness.is_none())
    }

    pub fn holds(&self, check: OrderCheck) -> bool {
        self.checks
            .iter()
            .find(|c| c.check == check)
            .is_some_and(|c| c.witness.is_none())
    }

    pub fn first_failure(&self) -> Option<&OrderCheckResult> {
        self.checks.iter().find(|c| c.witness.is_some())
    }
}

impl fmt::Display for OrderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{:<14} pass", c.check.name())?,
                Some(w) => writeln!(f, "{:<14} FAIL: {w}", c.check.name())?,
            }
        }
        if let Some(p) = self.proper {
            writeln!(f, "{:<14} {}", "proper", if p { "yes" } else { "no" })?;
        }
        Ok(())
    }
}

/// A verified dg-order, with a homogeneous Z-basis.
#[derive(Clone, Debug)]
pub struct DgOrder {
    algebra: Arc<DgAlgebra>,
    lattice: ZLattice,
    basis: Vec<Vec<Q>>,
    degrees: Vec<i64>,
    /// Inverse of the basis matrix: coordinates are v * inverse.
    inverse: QMatrix,
    proper: bool,
}

impl PartialEq for DgOrder {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.lattice == other.lattice
    }
}

impl DgOrder {
    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.algebra
    }

    pub fn lattice(&self) -> &ZLattice {
        &self.lattice
    }

    /// Homogeneous Z-basis, ordered by degree.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// Rational coordinates in the homogeneous basis.
    pub fn rational_coords(&self, v: &[Q]) -> Vec<Q> {
        self.inverse.left_apply(v)
    }

    pub fn coords(&self, v: &[Q]) -> Option<Vec<Z>> {
        let c = self.rational_coords(v);
        if c.iter().all(|x| x.is_integer()) {
            Some(c.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    /// The element with the given integer coordinates.
    pub fn element(&self, c: &[Z]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.algebra.dim()];
        for (b, x) in self.basis.iter().zip(c) {
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

    /// The order as a dg-algebra over Z in its homogeneous basis.
    pub fn integral_algebra(&self) -> DgAlgebra {
        let a = &self.algebra.algebra;
        let n = self.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let prod = a.mul(&self.basis[i], &self.basis[j]);
                for (k, c) in self.coords(&prod).expect("closed").into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, Q::from_integer(c)));
                    }
                }
            }
        }
        let unit: Vec<Q> = self
            .coords(a.unit())
            .expect("unital")
            .into_iter()
            .map(Q::from_integer)
            .collect();
        let names = (0..n).map(|i| format!("b{i}")).collect();
        let alg = GradedAlgebra::with_unit(CoefficientRing::Integers, names, self.degrees.clone(), &entries, unit)
            .expect("order structure constants");
        let mut d = QMatrix::zeros(n, n);
        for i in 0..n {
            for (k, c) in self
                .coords(&self.algebra.d(&self.basis[i]))
                .expect("d-stable")
                .into_iter()
                .enumerate()
            {
                d[(k, i)] = Q::from_integer(c);
            }
        }
        DgAlgebra::new(alg, crate::graded::Differential::new(d)).expect("order differential")
    }

    /// Lambda / m Lambda as a dg-algebra over F_p or Z/m.
    pub fn reduce_mod(&self, m: u64) -> Result<DgAlgebra> {
        let ring = if crate::ring::is_prime(m) && m > 2 {
            CoefficientRing::prime_field(m)?
        } else {
            CoefficientRing::residue(m)?
        };
        self.integral_algebra().change_ring(ring)
    }

    pub fn homology(&self) -> Result<HomologyPresentation> {
        algebra_homology(&self.integral_algebra())
    }

    /// Reduced-trace discriminant det(trd(b_i b_j)).
    pub fn discriminant(&self) -> Result<Q> {
        let trd = ReducedTrace::new(&self.algebra.algebra)?;
        Ok(trd.discriminant(&self.algebra.algebra, &self.basis))
    }

    /// Discriminant one: maximal among all orders of a split algebra.
    pub fn is_classically_maximal(&self) -> Result<bool> {
        Ok(self.discriminant()?.abs().is_one())
    }
}

/// Homogeneous Z-basis of a graded lattice, or `NotGraded`.
pub fn graded_basis(a: &GradedAlgebra, l: &ZLattice) -> Result<Vec<(i64, Vec<Q>)>> {
    let n = a.dim();
    let mut out = Vec::new();
    for deg in a.degree_list() {
        let idx = a.indices_of_degree(deg);
        let mut gens = Vec::new();
        for b in l.basis() {
            let mut c = vec![Q::zero(); n];
            for &i in &idx {
                c[i] = b[i].clone();
            }
            if !l.contains(&c) {
                return Err(Error::NotGraded);
            }
            gens.push(c);
        }
        for v in ZLattice::from_generators(n, &gens)?.basis() {
            out.push((deg, v));
        }
    }
    Ok(out)
}

fn require_rational(dg: &DgAlgebra) -> Result<()> {
    match dg.ring() {
        CoefficientRing::Rationals => Ok(()),
        r => Err(Error::UnsupportedRing(format!("orders live in algebras over Q, got {r}"))),
    }
}

/// Runs every order check on a lattice in a rational dg-algebra.
pub fn check_dg_order(dg: &DgAlgebra, l: &ZLattice) -> Result<OrderReport> {
    require_rational(dg)?;
    let a = &dg.algebra;
    let n = a.dim();
    if l.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: l.ambient(),
        });
    }
    let names = a.names();
    let mut checks = Vec::new();
    let mut push = |check, witness| checks.push(OrderCheckResult { check, witness });
    if !l.is_full() {
        push(
            OrderCheck::FullRank,
            Some(format!("rank {} in dimension {n}", l.rank())),
        );
        return Ok(OrderReport { checks, proper: None });
    }
    push(OrderCheck::FullRank, None);
    let basis: Vec<Vec<Q>> = match graded_basis(a, l) {
        Ok(b) => {
            push(OrderCheck::Grading, None);
            b.into_iter().map(|(_, v)| v).collect()
        }
        Err(_) => {
            push(OrderCheck::Grading, Some("a basis vector has a component outside the lattice".into()));
            l.basis()
        }
    };
    push(
        OrderCheck::Unit,
        (!l.contains(a.unit())).then(|| "1 is not in the lattice".to_string()),
    );
    let mut closure = None;
    'outer: for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let p = a.mul(x, y);
            if !l.contains(&p) {
                closure = Some(format!(
                    "({}) * ({}) = {} at basis pair ({i}, {j})",
                    format_vector(names, x),
                    format_vector(names, y),
                    format_vector(names, &p)
                ));
                break 'outer;
            }
        }
    }
    push(OrderCheck::RingClosure, closure);
    let stability = basis.iter().find_map(|x| {
        let dx = dg.d(x);
        (!l.contains(&dx)).then(|| {
            format!(
                "d({}) = {} is not in the lattice",
                format_vector(names, x),
                format_vector(names, &dx)
            )
        })
    });
    push(OrderCheck::DStability, stability);
    let integrality = basis.iter().find_map(|x| {
        let cp = field::charpoly(&a.left_mult_matrix(x));
        (!cp.iter().all(|c| c.is_integer()))
            .then(|| format!("{} is not integral", format_vector(names, x)))
    });
    push(OrderCheck::Integrality, integrality);
    let mut report = OrderReport { checks, proper: None };
    if report.passed() {
        let order = build_order(dg, l)?;
        report.proper = Some(order.proper);
    }
    Ok(report)
}

fn build_order(dg: &DgAlgebra, l: &ZLattice) -> Result<DgOrder> {
    let a = &dg.algebra;
    let graded = graded_basis(a, l)?;
    let degrees: Vec<i64> = graded.iter().map(|(d, _)| *d).collect();
    let basis: Vec<Vec<Q>> = graded.into_iter().map(|(_, v)| v).collect();
    let inverse = field::inverse(&CoefficientRing::Rationals, &QMatrix::from_rows(&basis, a.dim()))
        .ok_or(Error::NotFull)?;
    let mut order = DgOrder {
        algebra: Arc::new(dg.clone()),
        lattice: l.clone(),
        basis,
        degrees,
        inverse,
        proper: false,
    };
    order.proper = order.homology()?.is_torsion_free();
    Ok(order)
}

/// The lattice as a verified dg-order, or `NotAnOrder` naming the first
/// failed check.
pub fn is_dg_order(dg: &DgAlgebra, l: &ZLattice) -> Result<DgOrder> {
    let report = check_dg_order(dg, l)?;
    if let Some(f) = report.first_failure() {
        return Err(Error::NotAnOrder(format!(
            "{}: {}",
            f.check.name(),
            f.witness.as_deref().unwrap_or("")
        )));
    }
    build_order(dg, l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// {x in A : x L in L} (left) or {x in A : L x in L} (right) for a full
/// lattice L.
pub fn multiplier_lattice(a: &GradedAlgebra, l: &ZLattice, side: Side) -> Result<ZLattice> {
    if !l.is_full() {
        return Err(Error::NotFull);
    }
    let n = a.dim();
    let basis = l.basis();
    let inv = field::inverse(&CoefficientRing::Rationals, &QMatrix::from_rows(&basis, n))
        .ok_or(Error::NotFull)?;
    let mut m = QMatrix::zeros(n, n * n);
    for i in 0..n {
        let ai = a.basis_vector(i);
        for (j, b) in basis.iter().enumerate() {
            let p = match side {
                Side::Left => a.mul(&ai, b),
                Side::Right => a.mul(b, &ai),
            };
            for (k, c) in inv.left_apply(&p).into_iter().enumerate() {
                m[(i, j * n + k)] = c;
            }
        }
    }
    rational_solutions(&m)
}

/// {x in L : d(x) in L}.
pub fn d_stable_part(dg: &DgAlgebra, l: &ZLattice) -> Result<ZLattice> {
    if !l.is_full() {
        return Err(Error::NotFull);
    }
    let n = dg.dim();
    let basis = l.basis();
    let bm = QMatrix::from_rows(&basis, n);
    let inv = field::inverse(&CoefficientRing::Rationals, &bm).ok_or(Error::NotFull)?;
    let dt = dg.differential.matrix().transpose();
    let m = bm.mul_mat(&dt).mul_mat(&inv);
    let sols = integral_solutions(&m);
    let gens: Vec<Vec<Q>> = sols
        .basis()
        .iter()
        .map(|c| bm.left_apply(c))
        .collect();
    ZLattice::from_generators(n, &gens)
}

fn conductor_order(dg: &DgAlgebra, l: &ZLattice, side: Side) -> Result<DgOrder> {
    require_rational(dg)?;
    if !l.is_full() {
        return Err(Error::NotFull);
    }
    graded_basis(&dg.algebra, l)?;
    if l.basis().iter().any(|b| !l.contains(&dg.d(b))) {
        return Err(Error::NotDgLattice);
    }
    let o = multiplier_lattice(&dg.algebra, l, side)?;
    is_dg_order(dg, &o)
}

/// O_l(L) = {x : x L in L} for a full graded d-stable lattice.
pub fn left_order(dg: &DgAlgebra, l: &ZLattice) -> Result<DgOrder> {
    conductor_order(dg, l, Side::Left)
}

/// O_r(L) = {x : L x in L}.
pub fn right_order(dg: &DgAlgebra, l: &ZLattice) -> Result<DgOrder> {
    conductor_order(dg, l, Side::Right)
}

/// The reduced trace of a semisimple algebra whose blocks are central
/// simple over Q: trd(x) = sum over blocks e of Tr(L_{xe}) / n_e, where
/// the block eA has dimension n_e^2.
pub struct ReducedTrace {
    blocks: Vec<(Vec<Q>, u64)>,
}

impl ReducedTrace {
    pub fn new(a: &GradedAlgebra) -> Result<Self> {
        let u = a.ungraded();
        let ci = central_idempotents(&u)?;
        if !ci.split {
            return Err(Error::NotSplit("the center does not split over Q".into()));
        }
        let center = center_degree_zero(&u)?;
        let ring = CoefficientRing::Rationals;
        let mut blocks = Vec::new();
        for e in ci.primitive {
            let dim = field::rank(&ring, &u.left_mult_matrix(&e));
            let n = num_integer::Roots::sqrt(&dim);
            if n * n != dim {
                return Err(Error::NotSplit(format!("a block has dimension {dim}, not a square")));
            }
            let zc: Vec<Vec<Q>> = center.iter().map(|z| u.mul(z, &e)).collect();
            let cdim = field::rank(&ring, &QMatrix::from_rows(&zc, u.dim()));
            if cdim != 1 {
                return Err(Error::NotSplit(format!("a block has center of dimension {cdim}")));
            }
            blocks.push((e, n as u64));
        }
        Ok(ReducedTrace { blocks })
    }

    /// Primitive central idempotents with the degree n of each block.
    pub fn blocks(&self) -> &[(Vec<Q>, u64)] {
        &self.blocks
    }

    pub fn block_degrees(&self) -> Vec<u64> {
        self.blocks.iter().map(|(_, n)| *n).collect()
    }

    pub fn trace(&self, a: &GradedAlgebra, x: &[Q]) -> Q {
        let mut t = Q::zero();
        for (e, n) in &self.blocks {
            let m = a.left_mult_matrix(&a.mul(x, e));
            let tr = (0..m.rows()).fold(Q::zero(), |acc, i| acc + &m[(i, i)]);
            t += tr / Q::from_integer(Z::from(*n));
        }
        t
    }

    pub fn discriminant(&self, a: &GradedAlgebra, basis: &[Vec<Q>]) -> Q {
        let k = basis.len();
        let mut g = QMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.trace(a, &a.mul(&basis[i], &basis[j]));
            }
        }
        field::det(&CoefficientRing::Rationals, &g)
    }
}
