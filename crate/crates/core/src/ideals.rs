//! dg-submodules generated by spinning, dg-simplicity, dg-maximal left
//! ideals, annihilators and the three dg-radicals.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::{opposite_dg_algebra, DgAlgebra};
use crate::linalg::{field, QMatrix, Subspace};
use crate::module::{cycle_maps, DgModule};
use crate::ring::{CoefficientRing, Q, Z};

/// Largest algebra dimension for the exhaustive ideal enumeration.
pub const EXHAUSTIVE_DIM_CAP: usize = 12;
/// Largest prime for the exhaustive ideal enumeration.
pub const EXHAUSTIVE_PRIME_CAP: u64 = 7;
/// Largest number of projective points enumerated in one degree.
pub const POINT_CAP: u128 = 1_000_000;
/// Largest number of distinct dg-submodules kept while closing under sums.
pub const LATTICE_CAP: u128 = 200_000;

const RANDOM_SPINS: usize = 64;

/// A graded subspace of a dg-module that is closed under the action and
/// the differential.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DgSubmodule {
    space: Subspace,
}

impl DgSubmodule {
    pub fn new(m: &DgModule, space: Subspace) -> Result<Self> {
        m.check_submodule(&space)?;
        Ok(DgSubmodule { space })
    }

    pub fn zero(m: &DgModule) -> Self {
        DgSubmodule {
            space: Subspace::zero(m.ring(), m.dim()),
        }
    }

    pub fn full(m: &DgModule) -> Self {
        DgSubmodule {
            space: Subspace::full(m.ring(), m.dim()),
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        self.space.basis()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn is_full(&self) -> bool {
        self.space.is_full()
    }

    pub fn contains(&self, other: &DgSubmodule) -> bool {
        self.space.contains_space(&other.space)
    }

    pub fn sum(&self, other: &DgSubmodule) -> DgSubmodule {
        DgSubmodule {
            space: self.space.sum(&other.space),
        }
    }

    pub fn intersect(&self, other: &DgSubmodule) -> DgSubmodule {
        DgSubmodule {
            space: self.space.intersect(&other.space),
        }
    }
}

fn require_field(ring: CoefficientRing) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::NotAField(ring.to_string()))
    }
}

fn require_exhaustive(dg: &DgAlgebra) -> Result<u64> {
    let ring = dg.ring();
    let CoefficientRing::PrimeField(p) = ring else {
        return Err(Error::UnsupportedRing(format!(
            "exhaustive enumeration needs a prime field, got {ring}"
        )));
    };
    if p > EXHAUSTIVE_PRIME_CAP {
        return Err(Error::UnsupportedRing(format!(
            "exhaustive enumeration needs p <= {EXHAUSTIVE_PRIME_CAP}, got {p}"
        )));
    }
    if dg.dim() > EXHAUSTIVE_DIM_CAP {
        return Err(Error::DimensionTooLarge {
            dim: dg.dim(),
            cap: EXHAUSTIVE_DIM_CAP,
        });
    }
    Ok(p)
}

/// Nonzero vectors of F_p^k with leading coordinate one, as coefficient
/// lists. Every line through the origin is hit exactly once.
pub fn projective_points(p: u64, k: usize) -> Result<Vec<Vec<u64>>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let count = (0..k as u32).fold(0u128, |acc, i| acc + (p as u128).pow(i));
    if count > POINT_CAP {
        return Err(Error::TooLarge {
            count,
            cap: POINT_CAP,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..k {
        let free = k - lead - 1;
        let mut tail = vec![0u64; free];
        loop {
            let mut v = vec![0u64; k];
            v[lead] = 1;
            v[lead + 1..].copy_from_slice(&tail);
            out.push(v);
            let mut i = 0;
            while i < free {
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                i += 1;
            }
            if i == free {
                break;
            }
        }
    }
    Ok(out)
}

fn combine(ring: &CoefficientRing, basis: &[Vec<Q>], coeffs: &[u64], dim: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = Q::from_integer(Z::from(c));
        for (x, y) in v.iter_mut().zip(b) {
            *x = ring.add(x, &ring.mul(&c, y));
        }
    }
    v
}

/// The columns of a matrix restricted to the given indices.
fn restrict_cols(m: &QMatrix, idx: &[usize]) -> QMatrix {
    let mut out = QMatrix::zeros(m.rows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..m.rows() {
            out[(r, c)] = m[(r, i)].clone();
        }
    }
    out
}

/// Homogeneous cycles of M spanning each degree's cycle space.
pub fn homogeneous_cycles(m: &DgModule) -> Result<Vec<(i64, Vec<Vec<Q>>)>> {
    let ring = m.ring();
    require_field(ring)?;
    let mut out = Vec::new();
    for deg in m.degree_list() {
        let idx = m.indices_of_degree(deg);
        let sub = restrict_cols(m.differential(), &idx);
        let basis: Vec<Vec<Q>> = field::kernel(&ring, &sub)
            .into_iter()
            .map(|k| {
                let mut v = vec![Q::zero(); m.dim()];
                for (c, &i) in idx.iter().enumerate() {
                    v[i] = k[c].clone();
                }
                v
            })
            .collect();
        if !basis.is_empty() {
            out.push((deg, basis));
        }
    }
    Ok(out)
}

/// All nonzero homogeneous cycles up to scalars, over F_p.
fn cycle_points(m: &DgModule, p: u64) -> Result<Vec<Vec<Q>>> {
    let ring = m.ring();
    let mut out = Vec::new();
    for (_, basis) in homogeneous_cycles(m)? {
        for c in projective_points(p, basis.len())? {
            out.push(combine(&ring, &basis, &c, m.dim()));
        }
    }
    Ok(out)
}

/// All nonzero homogeneous elements up to scalars, over F_p.
fn homogeneous_points(m: &DgModule, p: u64) -> Result<Vec<Vec<Q>>> {
    let ring = m.ring();
    let mut out = Vec::new();
    for deg in m.degree_list() {
        let basis: Vec<Vec<Q>> = m
            .indices_of_degree(deg)
            .into_iter()
            .map(|i| m.basis_vector(i))
            .collect();
        for c in projective_points(p, basis.len())? {
            out.push(combine(&ring, &basis, &c, m.dim()));
        }
    }
    Ok(out)
}

/// The smallest dg-submodule containing the homogeneous components of the
/// generators.
pub fn spin(m: &DgModule, generators: &[Vec<Q>]) -> Result<DgSubmodule> {
    let space = m.generated_submodule(generators)?;
    debug_assert!(m.check_submodule(&space).is_ok());
    Ok(DgSubmodule { space })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NotSimple(DgSubmodule),
    /// Every tested spin was full but the test does not certify simplicity.
    Unknown,
}

/// Decides dg-simplicity. Every nonzero dg-submodule contains a nonzero
/// homogeneous cycle, so M is simple iff each such cycle spins to M. Over
/// F_p all cycles are enumerated; over Q a basis of each cycle space and
/// random integer combinations are tried, which certifies simplicity only
/// when every cycle space has dimension at most one.
pub fn is_dg_simple(m: &DgModule) -> Result<Simplicity> {
    if m.dim() == 0 {
        return Err(Error::ZeroModule);
    }
    let ring = m.ring();
    require_field(ring)?;
    if let CoefficientRing::PrimeField(p) = ring {
        for u in cycle_points(m, p)? {
            let s = spin(m, &[u])?;
            if !s.is_full() {
                return Ok(Simplicity::NotSimple(s));
            }
        }
        return Ok(Simplicity::Simple);
    }
    let cycles = homogeneous_cycles(m)?;
    for (_, basis) in &cycles {
        for u in basis {
            let s = spin(m, std::slice::from_ref(u))?;
            if !s.is_full() {
                return Ok(Simplicity::NotSimple(s));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    for (_, basis) in cycles.iter().filter(|(_, b)| b.len() > 1) {
        for _ in 0..RANDOM_SPINS {
            let mut v = vec![Q::zero(); m.dim()];
            for b in basis {
                let c = Q::from_integer(Z::from(rng.gen_range(-1000i64..=1000)));
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let s = spin(m, &[v])?;
            if !s.is_full() {
                return Ok(Simplicity::NotSimple(s));
            }
        }
    }
    if cycles.iter().all(|(_, b)| b.len() <= 1) {
        Ok(Simplicity::Simple)
    } else {
        Ok(Simplicity::Unknown)
    }
}

/// Proper dg-submodules of M, closed under sums: every dg-submodule is a
/// sum of spins of homogeneous elements.
fn proper_submodules(m: &DgModule, p: u64) -> Result<Vec<DgSubmodule>> {
    let mut seeds: Vec<DgSubmodule> = Vec::new();
    let mut seen: HashSet<DgSubmodule> = HashSet::new();
    for v in homogeneous_points(m, p)? {
        let s = spin(m, &[v])?;
        debug_assert!(cycle_points(&m.submodule(s.space())?.0, p).map_or(true, |c| !c.is_empty()));
        if !s.is_full() && seen.insert(s.clone()) {
            seeds.push(s);
        }
    }
    let zero = DgSubmodule::zero(m);
    seen.insert(zero.clone());
    let mut all = vec![zero];
    all.extend(seeds.iter().cloned());
    let mut next = 1;
    while next < all.len() {
        let x = all[next].clone();
        next += 1;
        for s in &seeds {
            if x.contains(s) {
                continue;
            }
            let y = x.sum(s);
            if !y.is_full() && seen.insert(y.clone()) {
                all.push(y);
                if all.len() as u128 > LATTICE_CAP {
                    return Err(Error::TooLarge {
                        count: all.len() as u128,
                        cap: LATTICE_CAP,
                    });
                }
            }
        }
    }
    Ok(all)
}

fn maximal_elements(all: Vec<DgSubmodule>) -> Vec<DgSubmodule> {
    let mut out: Vec<DgSubmodule> = all
        .iter()
        .filter(|x| !all.iter().any(|y| y.dim() > x.dim() && y.contains(x)))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.basis().cmp(b.basis()));
    out
}

/// Maximal proper dg-submodules of a module over a small prime field.
pub fn dg_maximal_submodules(m: &DgModule) -> Result<Vec<DgSubmodule>> {
    let p = require_exhaustive(m.parent())?;
    if m.dim() > EXHAUSTIVE_DIM_CAP {
        return Err(Error::DimensionTooLarge {
            dim: m.dim(),
            cap: EXHAUSTIVE_DIM_CAP,
        });
    }
    Ok(maximal_elements(proper_submodules(m, p)?))
}

/// dg-maximal left ideals: maximal proper dg-submodules of the regular
/// module, sorted by canonical basis.
pub fn dg_maximal_left_ideals(dg: &DgAlgebra) -> Result<Vec<DgSubmodule>> {
    require_exhaustive(dg)?;
    dg_maximal_submodules(&DgModule::regular(Arc::new(dg.clone())))
}

/// True if the subspace is a graded twosided ideal stable under d.
pub fn is_twosided_dg_ideal(dg: &DgAlgebra, space: &Subspace) -> bool {
    let regular = DgModule::regular(Arc::new(dg.clone()));
    if regular.check_submodule(space).is_err() {
        return false;
    }
    let a = &dg.algebra;
    space.basis().iter().all(|v| {
        (0..a.dim()).all(|i| space.contains(&a.mul(v, &a.basis_vector(i))))
    })
}

/// {a : a M = 0}, a twosided dg-ideal of the parent algebra.
pub fn annihilator(m: &DgModule) -> Result<DgSubmodule> {
    let ring = m.ring();
    require_field(ring)?;
    let parent = m.parent();
    let n = parent.dim();
    let dim = m.dim();
    // row i lists the coordinates of b_i m_j for all j
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![Q::zero(); dim * dim];
        for j in 0..dim {
            for (k, v) in m.action_of(i, j) {
                row[j * dim + k] = v.clone();
            }
        }
        rows.push(row);
    }
    let space = if dim == 0 {
        Subspace::full(ring, n)
    } else {
        let kernel = field::left_kernel(&ring, &QMatrix::from_rows(&rows, dim * dim));
        Subspace::span(ring, n, &kernel)?
    };
    debug_assert!(is_twosided_dg_ideal(parent, &space));
    Ok(DgSubmodule { space })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgRadicals {
    pub left: DgSubmodule,
    pub right: DgSubmodule,
    pub two: DgSubmodule,
    pub maximal_left: Vec<DgSubmodule>,
}

fn intersect_all(ring: CoefficientRing, n: usize, xs: &[DgSubmodule]) -> DgSubmodule {
    xs.iter().fold(
        DgSubmodule {
            space: Subspace::full(ring, n),
        },
        |acc, x| acc.intersect(x),
    )
}

/// The left dg-radical (intersection of dg-maximal left ideals), the right
/// one (the same for the opposite algebra, in the same coordinates) and
/// the intersection of the annihilators of the dg-simple quotients.
pub fn dg_radicals(dg: &DgAlgebra) -> Result<DgRadicals> {
    let ring = dg.ring();
    let n = dg.dim();
    let maximal_left = dg_maximal_left_ideals(dg)?;
    let left = intersect_all(ring, n, &maximal_left);
    let right = intersect_all(ring, n, &dg_maximal_left_ideals(&opposite_dg_algebra(dg))?);
    let regular = DgModule::regular(Arc::new(dg.clone()));
    let mut anns = Vec::with_capacity(maximal_left.len());
    for i in &maximal_left {
        let (quotient, _) = regular.quotient(i.space())?;
        anns.push(annihilator(&quotient)?);
    }
    let two = intersect_all(ring, n, &anns);
    Ok(DgRadicals {
        left,
        right,
        two,
        maximal_left,
    })
}

/// The span of r m for r in the ideal and m in M.
pub fn ideal_times_module(m: &DgModule, ideal: &DgSubmodule) -> Result<Subspace> {
    let mut vs = Vec::new();
    for r in ideal.basis() {
        for j in 0..m.dim() {
            vs.push(m.act(r, &m.basis_vector(j)));
        }
    }
    Subspace::span(m.ring(), m.dim(), &vs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaReport {
    /// J M = M only for M = 0.
    pub absolute: bool,
    /// N + J M = M implies N = M for every tested N.
    pub relative: bool,
    pub radical_times_module_dim: usize,
    pub tested_submodules: usize,
    /// A proper N with N + J M = M, if one was found.
    pub counterexample: Option<DgSubmodule>,
}

impl NakayamaReport {
    pub fn holds(&self) -> bool {
        self.absolute && self.relative
    }
}

/// Checks the dg-Nakayama property for M over its parent, with J the
/// intersection of annihilators of dg-simple modules.
pub fn check_nakayama(m: &DgModule) -> Result<NakayamaReport> {
    let radicals = dg_radicals(m.parent())?;
    check_nakayama_with(m, &radicals.two)
}

/// As `check_nakayama` with a precomputed radical.
pub fn check_nakayama_with(m: &DgModule, two: &DgSubmodule) -> Result<NakayamaReport> {
    let jm = ideal_times_module(m, two)?;
    let absolute = !(m.dim() > 0 && jm.is_full());
    let mut candidates = vec![DgSubmodule::zero(m)];
    for j in 0..m.dim() {
        candidates.push(spin(m, &[m.basis_vector(j)])?);
    }
    let mut counterexample = None;
    for n in &candidates {
        if !n.is_full() && n.space().sum(&jm).is_full() {
            counterexample = Some(n.clone());
            break;
        }
    }
    Ok(NakayamaReport {
        absolute,
        relative: counterexample.is_none(),
        radical_times_module_dim: jm.dim(),
        tested_submodules: candidates.len(),
        counterexample,
    })
}

/// A minimal nonzero dg-submodule: the smallest spin of a homogeneous cycle.
fn minimal_submodule(m: &DgModule, p: u64) -> Result<DgSubmodule> {
    let mut best: Option<DgSubmodule> = None;
    for u in cycle_points(m, p)? {
        let s = spin(m, &[u])?;
        if best.as_ref().is_none_or(|b| s.dim() < b.dim()) {
            best = Some(s);
        }
    }
    best.ok_or(Error::ZeroModule)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// dg-simple submodules whose internal direct sum is M.
    Summands(Vec<DgSubmodule>),
    /// A dg-simple submodule of `ambient` with no dg-complement in it.
    NoComplement {
        submodule: DgSubmodule,
        ambient: DgSubmodule,
    },
}

/// Peels off minimal dg-submodules with complements. A complement of S in
/// C exists iff some degree-0 cycle map C -> S restricts to the identity
/// on S; its kernel is then the complement.
pub fn dg_semisimple_decomposition(m: &DgModule) -> Result<Decomposition> {
    let p = require_exhaustive(m.parent())?;
    let ring = m.ring();
    let mut current = Subspace::full(ring, m.dim());
    let mut summands = Vec::new();
    while !current.is_zero() {
        let (c, c_incl) = m.submodule(&current)?;
        let s = minimal_submodule(&c, p)?;
        let (smod, s_incl) = c.submodule(s.space())?;
        let to_m = |vs: &[Vec<Q>]| -> Result<Subspace> {
            let mapped: Vec<Vec<Q>> = vs.iter().map(|v| c_incl.apply(v)).collect();
            Subspace::span(ring, m.dim(), &mapped)
        };
        let s_in_m = DgSubmodule {
            space: to_m(s.basis())?,
        };
        let maps = cycle_maps(&c, &smod)?;
        // sum_k x_k (F_k s_incl) = id, flattened
        let k = smod.dim();
        let cols: Vec<Vec<Q>> = maps
            .iter()
            .map(|f| f.mul_mat(&s_incl).entries().to_vec())
            .collect();
        let target = QMatrix::identity(k).entries().to_vec();
        let solution = if cols.is_empty() {
            None
        } else {
            field::solve(&ring, &QMatrix::from_rows(&cols, k * k).transpose(), &target)
        };
        let Some(x) = solution else {
            return Ok(Decomposition::NoComplement {
                submodule: s_in_m,
                ambient: DgSubmodule { space: current },
            });
        };
        let mut pi = QMatrix::zeros(k, c.dim());
        for (f, xk) in maps.iter().zip(&x) {
            let data: Vec<Q> = pi
                .entries()
                .iter()
                .zip(f.entries())
                .map(|(a, b)| ring.add(a, &ring.mul(xk, b)))
                .collect();
            pi = QMatrix::from_vec(k, c.dim(), data)?;
        }
        let complement = field::kernel(&ring, &pi);
        summands.push(s_in_m);
        current = to_m(&complement)?;
    }
    Ok(Decomposition::Summands(summands))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub primitive: bool,
    /// A dg-maximal left ideal I with A/I faithful.
    pub witness: Option<DgSubmodule>,
    /// Kernel of A -> prod A/ann(A/I) equals the two-sided dg-radical.
    pub subdirect_injective: bool,
    pub components_surjective: bool,
}

/// dg-primitivity: some dg-simple quotient A/I is faithful. Also checks the
/// subdirect product map A/dgrad_2 -> prod A/ann(A/I).
pub fn is_dg_primitive(dg: &DgAlgebra) -> Result<PrimitivityReport> {
    let ring = dg.ring();
    let n = dg.dim();
    let radicals = dg_radicals(dg)?;
    let regular = DgModule::regular(Arc::new(dg.clone()));
    let mut witness = None;
    let mut projections: Vec<QMatrix> = Vec::new();
    let mut components_surjective = true;
    for i in &radicals.maximal_left {
        let (quotient, _) = regular.quotient(i.space())?;
        let ann = annihilator(&quotient)?;
        if ann.is_zero() && witness.is_none() {
            witness = Some(i.clone());
        }
        let (_, proj) = regular.quotient(ann.space())?;
        components_surjective &= field::rank(&ring, &proj) == proj.rows();
        projections.push(proj);
    }
    let rows: Vec<Vec<Q>> = projections.iter().flat_map(|p| p.row_vecs()).collect();
    let kernel = if rows.is_empty() {
        Subspace::full(ring, n)
    } else {
        Subspace::span(ring, n, &field::kernel(&ring, &QMatrix::from_rows(&rows, n)))?
    };
    Ok(PrimitivityReport {
        primitive: witness.is_some(),
        witness,
        subdirect_injective: kernel == *radicals.two.space(),
        components_surjective,
    })
}

/// The dg-simple modules A/I over the dg-maximal left ideals I, one per
/// isomorphism class up to shift.
pub fn dg_simple_modules(dg: &DgAlgebra) -> Result<Vec<DgModule>> {
    let regular = DgModule::regular(Arc::new(dg.clone()));
    let mut out: Vec<DgModule> = Vec::new();
    for i in dg_maximal_left_ideals(dg)? {
        let (s, _) = regular.quotient(i.space())?;
        let mut known = false;
        for t in &out {
            if same_up_to_shift(&s, t)? {
                known = true;
                break;
            }
        }
        if !known {
            out.push(s);
        }
    }
    Ok(out)
}

/// Whether S is isomorphic to some shift of T.
pub fn same_up_to_shift(s: &DgModule, t: &DgModule) -> Result<bool> {
    if s.dim() != t.dim() {
        return Ok(false);
    }
    let (Some(a), Some(b)) = (s.degrees().iter().min(), t.degrees().iter().min()) else {
        return Ok(true);
    };
    let shifted = s.shift(a - b);
    Ok(crate::module::find_isomorphism(&shifted, t)?.is_some())
}
