//! Mayer-Vietoris data for a central idempotent, pullback lattices L_u,
//! the homology class map and the kernel Cl_hi.

use num_traits::Zero;

use super::conductor::{
    dg_idele_class_group, split_characters, visible_units, SplitPicard, FINITENESS_CAVEAT,
};
use super::finite::{FiniteAbelianGroup, LatticeQuotient};
use super::idele::{
    constrained_sublattice, ideal_from_idele, is_free_rank_one, FractionalDgIdeal, Freeness, Idele,
};
use crate::error::{Error, Result};
use crate::graded::{central_idempotents, is_semisimple, GradedAlgebra};
use crate::homology::{homology_of_complex, homology_ring, HomologyRing};
use crate::linalg::{field, is_zero_vec, QMatrix, ZLattice};
use crate::orders::{graded_basis, DgOrder};
use crate::ring::{prime_factors, CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

/// Largest unit group enumerated elementwise by the exactness check.
pub const MV_UNIT_CAP: usize = 5_000;

/// Lambda e, Lambda f, the kernels Lambda cap Ae and Lambda cap Af, and
/// the common quotient Lambda e / (Lambda cap Ae).
pub struct MvSquare<'a> {
    order: &'a DgOrder,
    e: Vec<Q>,
    f: Vec<Q>,
    pub lambda_e: ZLattice,
    pub lambda_f: ZLattice,
    pub kernel_e: ZLattice,
    pub kernel_f: ZLattice,
    quotient: LatticeQuotient,
}

fn check_central_idempotent(order: &DgOrder, e: &[Q]) -> Result<()> {
    let dg = order.algebra();
    let a = &dg.algebra;
    if e.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: e.len(),
        });
    }
    let central = (0..a.dim()).all(|i| {
        let b = a.basis_vector(i);
        a.mul(e, &b) == a.mul(&b, e)
    });
    let ok = central
        && a.mul(e, e) == e
        && !is_zero_vec(e)
        && e != a.unit()
        && a.homogeneous_degree(e) == Some(0)
        && is_zero_vec(&dg.d(e));
    if ok {
        Ok(())
    } else {
        Err(Error::NotCentralIdempotent)
    }
}

fn lattice_of(n: usize, gens: &[Vec<Q>]) -> Result<ZLattice> {
    ZLattice::from_generators(n, gens)
}

impl<'a> MvSquare<'a> {
    pub fn new(order: &'a DgOrder, e: &[Q]) -> Result<Self> {
        check_central_idempotent(order, e)?;
        let a = &order.algebra().algebra;
        let n = a.dim();
        let f = a.sub(a.unit(), e);
        let proj = |x: &[Q]| -> Vec<Vec<Q>> { order.basis().iter().map(|b| a.mul(b, x)).collect() };
        let lambda_e = lattice_of(n, &proj(e))?;
        let lambda_f = lattice_of(n, &proj(&f))?;
        let kernel_e = lattice_of(n, &constrained_sublattice(order.basis(), |v| a.mul(v, &f)))?;
        let kernel_f = lattice_of(n, &constrained_sublattice(order.basis(), |v| a.mul(v, e)))?;
        let quotient = LatticeQuotient::new(a, &lambda_e, &kernel_e, e)?;
        Ok(MvSquare {
            order,
            e: e.to_vec(),
            f,
            lambda_e,
            lambda_f,
            kernel_e,
            kernel_f,
            quotient,
        })
    }

    pub fn quotient(&self) -> &LatticeQuotient {
        &self.quotient
    }

    /// True when Lambda = Lambda e x Lambda f.
    pub fn is_split(&self) -> bool {
        self.quotient.ring().dim() == 0
    }

    /// The class in Lambda e / (Lambda cap Ae) glued to b in Lambda f: the
    /// unique a with lift(a) + b in Lambda.
    pub fn glue(&self, b: &[Q]) -> Result<Vec<u64>> {
        let ring = self.quotient.ring();
        for x in ring.elements()? {
            let v = self.order.algebra().algebra.add(&self.quotient.lift(&x), b);
            if self.order.contains(&v) {
                return Ok(x);
            }
        }
        Err(Error::InvalidParameter("element is not in the projection of the order".into()))
    }

    /// Residue of d(lift(x)).
    fn d_bar(&self, x: &[u64]) -> Vec<u64> {
        let v = self.order.algebra().d(&self.quotient.lift(x));
        self.quotient.reduce(&v).expect("Lambda e is d-stable")
    }

    fn is_degree_zero(&self, x: &[u64]) -> bool {
        x.iter()
            .zip(self.quotient.degrees())
            .all(|(c, &d)| *c == 0 || d == 0)
    }

    /// L_u = Lambda (lift(u) + f) + (Lambda cap Ae).
    pub fn pullback_lattice(&self, u: &[u64]) -> Result<FractionalDgIdeal> {
        let ring = self.quotient.ring();
        if !ring.is_unit(u) {
            return Err(Error::NotUnit);
        }
        if !self.is_degree_zero(u) || self.d_bar(u).iter().any(|&c| c != 0) {
            return Err(Error::InvalidParameter("u is not a degree-0 cycle".into()));
        }
        let a = &self.order.algebra().algebra;
        let hat = a.add(&self.quotient.lift(u), &self.f);
        let mut gens: Vec<Vec<Q>> = self.order.basis().iter().map(|b| a.mul(b, &hat)).collect();
        gens.extend(self.kernel_e.basis());
        let lattice = lattice_of(a.dim(), &gens)?;
        let dg_stable = lattice.basis().iter().all(|v| lattice.contains(&self.order.algebra().d(v)));
        // an idele with the same lattice, when lift(u) + f is invertible
        let idele = if field::det(&QQ, &a.left_mult_matrix(&hat)).is_zero() {
            None
        } else {
            let primes = prime_factors(&Z::from(ring.size().max(1) as u64));
            let id = Idele::principal(&primes, &hat, false);
            ideal_from_idele(self.order, &id)
                .ok()
                .filter(|l| l.lattice == lattice)
                .map(|_| id)
        };
        Ok(FractionalDgIdeal {
            lattice,
            idele,
            dg_stable,
            locally_free: true,
        })
    }

    /// Units of Lambda e (sign = true) or Lambda f that are degree-0 cycles:
    /// all of them when the degree-0 cycles of that factor form a
    /// commutative split algebra, otherwise the visible ones.
    fn component_units(&self, side_e: bool) -> Result<(Vec<Vec<Q>>, bool)> {
        let dg = self.order.algebra();
        let a = &dg.algebra;
        let (idem, lat) = if side_e { (&self.e, &self.lambda_e) } else { (&self.f, &self.lambda_f) };
        let span: Vec<Vec<Q>> = (0..a.dim())
            .filter(|&i| a.degree(i) == 0)
            .map(|i| a.mul(&a.basis_vector(i), idem))
            .collect();
        let zero_cycles = constrained_sublattice(&span, |v| dg.d(v));
        let contains = |v: &[Q]| lat.contains(v);
        if let Ok(signs) = sign_units(a, &zero_cycles, idem) {
            return Ok((signs.into_iter().filter(|v| contains(v)).collect(), true));
        }
        let basis = lat.basis();
        Ok((visible_units(a, &basis, idem, Some(dg), contains)?, false))
    }

    /// The Mayer-Vietoris check.
    pub fn exactness(&self) -> Result<MvReport> {
        let ring = self.quotient.ring();
        let caveats = vec![FINITENESS_CAVEAT.to_string(), super::conductor::EICHLER_CAVEAT.to_string()];
        if self.is_split() {
            return Ok(MvReport::split(caveats));
        }
        let units = ring.units()?;
        let cycle_units: Vec<usize> = (0..units.order())
            .filter(|&i| {
                let x = units.element(i);
                self.is_degree_zero(x) && self.d_bar(x).iter().all(|&c| c == 0)
            })
            .collect();
        if cycle_units.len() > MV_UNIT_CAP {
            return Err(Error::TooLarge {
                count: cycle_units.len() as u128,
                cap: MV_UNIT_CAP as u128,
            });
        }
        let (ue, complete_e) = self.component_units(true)?;
        let (uf, complete_f) = self.component_units(false)?;
        let mut images = Vec::new();
        for x in &ue {
            images.push(units.index_of(&self.quotient.reduce(x).ok_or(Error::NotUnit)?).ok_or(Error::NotUnit)?);
        }
        for y in &uf {
            let g = self.glue(y)?;
            images.push(units.inverse(units.index_of(&g).ok_or(Error::NotUnit)?));
        }
        let image = units.closure(&images);

        // global units of Lambda map to 1
        let a = &self.order.algebra().algebra;
        let global = visible_units(a, self.order.basis(), a.unit(), Some(self.order.algebra()), |v| {
            self.order.contains(v)
        })?;
        let mut composites_vanish = global.iter().all(|g| {
            let ge = a.mul(g, &self.e);
            let gf = a.mul(g, &self.f);
            self.quotient.reduce(&ge) == self.glue(&gf).ok()
        });

        let mut restrictions_trivial = true;
        let mut exact = Some(true);
        let mut free_count = 0usize;
        let mut hi_units = 0usize;
        let mut hi_composite_vanishes = true;
        let ch = HomologyClassMap::new(self.order);
        for &i in &cycle_units {
            let u = units.element(i);
            let l = self.pullback_lattice(u)?;
            let le = l.lattice.basis().iter().map(|v| a.mul(v, &self.e)).collect::<Vec<_>>();
            let lf = l.lattice.basis().iter().map(|v| a.mul(v, &self.f)).collect::<Vec<_>>();
            let restricted = lattice_of(a.dim(), &le)? == self.lambda_e && lattice_of(a.dim(), &lf)? == self.lambda_f;
            restrictions_trivial &= restricted && l.dg_stable;
            let freeness = match is_free_rank_one(self.order, &l) {
                Ok(f) => f,
                Err(Error::ConductorNotComputed(_)) => Freeness::Undetermined {
                    searched: 0,
                    class_trivial: false,
                },
                Err(e) => return Err(e),
            };
            let in_image = image.contains(i);
            match (&freeness, in_image) {
                (Freeness::Free { .. }, true) => free_count += 1,
                (Freeness::Free { .. }, false) => {
                    free_count += 1;
                    exact = Some(false);
                }
                (Freeness::NotFree(_), true) => {
                    composites_vanish = false;
                    exact = Some(false);
                }
                (Freeness::NotFree(_), false) => {}
                (Freeness::Undetermined { .. }, _) => {
                    if in_image {
                        composites_vanish = false;
                    }
                    if exact == Some(true) {
                        exact = None;
                    }
                }
            }
            if let Ok(ch) = &ch {
                let class = ch.class_of(&l)?;
                if class.is_trivial() {
                    hi_units += 1;
                    // the restrictions of L_u are free, so their hi parts vanish too
                    hi_composite_vanishes &= restricted;
                }
            }
        }
        let complete = complete_e && complete_f;
        Ok(MvReport {
            split: false,
            quotient_units: units.order(),
            cycle_units: cycle_units.len(),
            image_order: cycle_units.iter().filter(|&&i| image.contains(i)).count(),
            components_complete: complete,
            composites_vanish,
            kernel_equals_image: if complete { exact } else { None },
            restrictions_trivial,
            free_pullbacks: free_count,
            hi_units: ch.as_ref().ok().map(|_| hi_units),
            hi_composite_vanishes,
            caveats,
        })
    }
}

/// All sign combinations sum(+-e_b) over the primitive idempotents of the
/// commutative algebra spanned by the degree-0 cycles, when it is split
/// semisimple.
fn sign_units(a: &GradedAlgebra, span: &[Vec<Q>], one: &[Q]) -> Result<Vec<Vec<Q>>> {
    if span.is_empty() {
        return Err(Error::InvalidParameter("empty".into()));
    }
    let commutative = span.iter().all(|x| span.iter().all(|y| a.mul(x, y) == a.mul(y, x)));
    if !commutative {
        return Err(Error::UnsupportedCycleOrder("not commutative".into()));
    }
    let basis = crate::linalg::Subspace::span(QQ, a.dim(), span)?.basis().to_vec();
    let names = (0..basis.len()).map(|i| format!("z{i}")).collect();
    let (sub, emb) = a.subalgebra(&basis, names)?;
    if !is_semisimple(&sub)? {
        return Err(Error::UnsupportedCycleOrder("not semisimple".into()));
    }
    let ci = central_idempotents(&sub)?;
    if !ci.split || ci.primitive.len() != sub.dim() {
        return Err(Error::UnsupportedCycleOrder("not split".into()));
    }
    let idems: Vec<Vec<Q>> = ci.primitive.iter().map(|e| emb.left_apply(e)).collect();
    let sum: Vec<Q> = idems.iter().fold(vec![Q::zero(); a.dim()], |acc, e| a.add(&acc, e));
    if sum != one {
        return Err(Error::InvalidParameter("idempotents do not sum to the unit".into()));
    }
    let r = idems.len();
    Ok((0u32..(1 << r))
        .map(|mask| {
            idems.iter().enumerate().fold(vec![Q::zero(); a.dim()], |acc, (b, e)| {
                if mask & (1 << b) != 0 {
                    a.sub(&acc, e)
                } else {
                    a.add(&acc, e)
                }
            })
        })
        .collect())
}

/// Outcome of the Mayer-Vietoris check over the finite unit data.
#[derive(Clone, Debug, PartialEq)]
pub struct MvReport {
    /// Lambda = Lambda e x Lambda f.
    pub split: bool,
    pub quotient_units: usize,
    /// Degree-0 units of the quotient killed by the induced differential.
    pub cycle_units: usize,
    /// Size of the image of the component units among them.
    pub image_order: usize,
    /// The component unit sets are complete, not just generators.
    pub components_complete: bool,
    /// Global units glue trivially and L_u is free for u in the image.
    pub composites_vanish: bool,
    /// L_u free exactly for u in the image; None when a test was
    /// inconclusive or the component units are incomplete.
    pub kernel_equals_image: Option<bool>,
    /// L_u e = Lambda e, L_u f = Lambda f and L_u is d-stable.
    pub restrictions_trivial: bool,
    pub free_pullbacks: usize,
    /// Units u whose L_u has trivial homology class, when the homology
    /// class map is available.
    pub hi_units: Option<usize>,
    pub hi_composite_vanishes: bool,
    pub caveats: Vec<String>,
}

impl MvReport {
    fn split(caveats: Vec<String>) -> Self {
        MvReport {
            split: true,
            quotient_units: 1,
            cycle_units: 1,
            image_order: 1,
            components_complete: true,
            composites_vanish: true,
            kernel_equals_image: Some(true),
            restrictions_trivial: true,
            free_pullbacks: 1,
            hi_units: Some(1),
            hi_composite_vanishes: true,
            caveats,
        }
    }

    /// Number of classes delta(u), i.e. cycle units modulo the image.
    pub fn delta_image_order(&self) -> usize {
        self.cycle_units / self.image_order.max(1)
    }

    pub fn holds(&self) -> bool {
        self.composites_vanish && self.restrictions_trivial && self.kernel_equals_image == Some(true)
    }
}

pub fn mv_pullback_lattice(order: &DgOrder, e: &[Q], u: &[u64]) -> Result<FractionalDgIdeal> {
    MvSquare::new(order, e)?.pullback_lattice(u)
}

pub fn mv_exactness_check(order: &DgOrder, e: &[Q]) -> Result<MvReport> {
    MvSquare::new(order, e)?.exactness()
}

/// Class of H(L)/t(H(L)) over the order H(Lambda)/t(H(Lambda)).
#[derive(Clone, Debug, PartialEq)]
pub enum HomologyClass {
    /// H(A) = 0: the target group is trivial.
    Degenerate,
    /// D = 0: the homology class is the classical class of L itself.
    Classical,
    /// Residue of a unit modulo the conductor, and whether it is trivial.
    Split { residues: Vec<u64>, trivial: bool },
}

impl HomologyClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            HomologyClass::Degenerate => true,
            HomologyClass::Classical => false,
            HomologyClass::Split { trivial, .. } => *trivial,
        }
    }
}

/// The homology class map L -> [H(L)/t] for a dg-order whose rational
/// homology is commutative and split semisimple.
pub struct HomologyClassMap<'a> {
    order: &'a DgOrder,
    kind: MapKind,
}

enum MapKind {
    Degenerate,
    Classical,
    Split {
        ring: HomologyRing,
        chars: Vec<Vec<Q>>,
        pic: SplitPicard,
    },
}

impl<'a> HomologyClassMap<'a> {
    pub fn new(order: &'a DgOrder) -> Result<Self> {
        let dg = order.algebra();
        let ring = homology_ring(dg)?;
        if ring.dim() == 0 {
            return Ok(HomologyClassMap {
                order,
                kind: MapKind::Degenerate,
            });
        }
        let h = ring.to_algebra()?;
        if !is_semisimple(&h)? {
            return Err(Error::HomologyNotSemisimple);
        }
        if dg.differential.is_zero() {
            return Ok(HomologyClassMap {
                order,
                kind: MapKind::Classical,
            });
        }
        let basis: Vec<Vec<Q>> = (0..h.dim()).map(|i| h.basis_vector(i)).collect();
        let commutative = basis.iter().all(|x| basis.iter().all(|y| h.mul(x, y) == h.mul(y, x)));
        if !commutative {
            return Err(Error::UnsupportedCycleOrder("the homology algebra is not commutative".into()));
        }
        let (chi, r) = split_characters(&h, &basis)?;
        // character values of the homology basis, column b = chi_b
        let chars: Vec<Vec<Q>> = basis
            .iter()
            .map(|v| chi(v))
            .collect();
        drop(chi);
        let images = cycle_images(order, order.lattice(), &ring)?;
        let gens: Vec<Vec<Z>> = images
            .iter()
            .map(|c| apply_chars(&chars, c, r))
            .map(|v| {
                if v.iter().all(|x| x.is_integer()) {
                    Ok(v.into_iter().map(|x| x.to_integer()).collect())
                } else {
                    Err(Error::InvalidParameter("homology of the order is not integral".into()))
                }
            })
            .collect::<Result<_>>()?;
        let pic = SplitPicard::new(&gens, r)?;
        Ok(HomologyClassMap {
            order,
            kind: MapKind::Split { ring, chars, pic },
        })
    }

    /// Cl(H(Lambda)/t) as computed, trivial when degenerate. None in the
    /// classical case, where it is the classical class group itself.
    pub fn target(&self) -> Option<FiniteAbelianGroup> {
        match &self.kind {
            MapKind::Degenerate => Some(FiniteAbelianGroup::trivial()),
            MapKind::Classical => None,
            MapKind::Split { pic, .. } => Some(pic.group()),
        }
    }

    pub fn class_of(&self, l: &FractionalDgIdeal) -> Result<HomologyClass> {
        match &self.kind {
            MapKind::Degenerate => Ok(HomologyClass::Degenerate),
            MapKind::Classical => Ok(HomologyClass::Classical),
            MapKind::Split { ring, chars, pic } => {
                let r = chars.first().map_or(0, Vec::len);
                let images = cycle_images(self.order, &l.lattice, ring)?;
                let gens: Vec<Vec<Q>> = images.iter().map(|c| apply_chars(chars, c, r)).collect();
                let (residues, trivial) = pic.class_of(&gens)?;
                Ok(HomologyClass::Split { residues, trivial })
            }
        }
    }
}

fn apply_chars(chars: &[Vec<Q>], c: &[Q], r: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); r];
    for (x, row) in c.iter().zip(chars) {
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

/// Homology classes of the cycles of a lattice, in class coordinates.
fn cycle_images(order: &DgOrder, l: &ZLattice, ring: &HomologyRing) -> Result<Vec<Vec<Q>>> {
    let dg = order.algebra();
    constrained_sublattice(&l.basis(), |v| dg.d(v))
        .iter()
        .map(|z| ring.presentation.class_of(z).ok_or(Error::NotAComplex))
        .collect()
}

/// Torsion invariants of H(L) per degree, L graded and d-stable.
pub fn lattice_torsion(order: &DgOrder, l: &ZLattice) -> Result<Vec<(i64, Vec<Z>)>> {
    let dg = order.algebra();
    let a = &dg.algebra;
    let gb = graded_basis(a, l)?;
    let basis: Vec<Vec<Q>> = gb.iter().map(|(_, v)| v.clone()).collect();
    let degrees: Vec<i64> = gb.iter().map(|(d, _)| *d).collect();
    let m = QMatrix::from_rows(&basis, a.dim());
    let k = basis.len();
    let mut d = QMatrix::zeros(k, k);
    for (j, b) in basis.iter().enumerate() {
        let c = field::solve_left(&QQ, &m, &dg.d(b)).ok_or(Error::NotDgLattice)?;
        for (i, x) in c.into_iter().enumerate() {
            if !x.is_integer() {
                return Err(Error::NotDgLattice);
            }
            d[(i, j)] = x;
        }
    }
    let h = homology_of_complex(CoefficientRing::Integers, &degrees, &d)?;
    let mut degs = degrees.clone();
    degs.sort_unstable();
    degs.dedup();
    Ok(degs.into_iter().map(|n| (n, h.torsion(n))).collect())
}

/// Result of the homology class map on one lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyClassReport {
    pub class: HomologyClass,
    /// t(H(L)) = t(H(Lambda)) degreewise.
    pub torsion_matches: bool,
    pub torsion: Vec<(i64, Vec<Z>)>,
}

pub fn homology_class_map(order: &DgOrder, l: &FractionalDgIdeal) -> Result<HomologyClassReport> {
    let map = HomologyClassMap::new(order)?;
    let class = map.class_of(l)?;
    let torsion = lattice_torsion(order, &l.lattice)?;
    let base = lattice_torsion(order, order.lattice())?;
    Ok(HomologyClassReport {
        class,
        torsion_matches: torsion == base,
        torsion,
    })
}

/// The sequence 0 -> Cl_hi -> Cl(Lambda, d) -> Cl(H(Lambda)/t) -> 0 on the
/// computable data.
#[derive(Clone, Debug, PartialEq)]
pub struct ClHiReport {
    /// The dg class group, when the idele bound is trivial.
    pub dg_class_group: Option<FiniteAbelianGroup>,
    pub dg_upper_bound: FiniteAbelianGroup,
    /// Cl(H(Lambda)/t); None in the classical case.
    pub homology_class_group: Option<FiniteAbelianGroup>,
    /// The kernel, when the dg class group is known.
    pub cl_hi: Option<FiniteAbelianGroup>,
    /// Exactness, when every group is known.
    pub exact: Option<bool>,
    pub caveats: Vec<String>,
}

pub fn cl_hi_sequence(order: &DgOrder) -> Result<ClHiReport> {
    let bound = dg_idele_class_group(order)?;
    let map = HomologyClassMap::new(order)?;
    let target = map.target();
    let (cl_hi, exact) = match (&bound.exact, &target) {
        // a trivial middle term forces a trivial kernel, and exactness
        // on the right then needs a trivial target
        (Some(g), Some(t)) if g.is_trivial() => (Some(FiniteAbelianGroup::trivial()), Some(t.is_trivial())),
        _ => (None, None),
    };
    Ok(ClHiReport {
        dg_class_group: bound.exact.clone(),
        dg_upper_bound: bound.upper_bound.clone(),
        homology_class_group: target,
        cl_hi,
        exact,
        caveats: bound.caveats,
    })
}
