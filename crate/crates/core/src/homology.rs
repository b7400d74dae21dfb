//! Homology of dg-modules over fields, Z and Z_(p), homology rings and
//! modules, and the semisimple-category test.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graded::{cycle_basis, cycles_subalgebra, is_semisimple, DgAlgebra, GradedAlgebra};
use crate::linalg::{field, kernel_basis, smith_normal_form, QMatrix, Subspace, ZMatrix};
use crate::module::DgModule;
use crate::ring::{common_denominator, mod_inverse, valuation, CoefficientRing, Q, Z};

/// Homology in one degree, presented by a basis of the cycles adapted to
/// the boundaries: the boundaries are spanned by factor_i * basis_i.
/// A factor of 1 marks a boundary direction, a factor > 1 a torsion
/// class of that order and 0 a free class.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeHomology {
    pub degree: i64,
    /// Ambient coordinates of this degree.
    pub indices: Vec<usize>,
    pub basis: Vec<Vec<Q>>,
    pub factors: Vec<Z>,
}

impl DegreeHomology {
    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    /// Torsion orders in increasing (divisibility) order.
    pub fn torsion(&self) -> Vec<Z> {
        let mut t: Vec<Z> = self.factors.iter().filter(|f| **f > Z::one()).cloned().collect();
        t.sort();
        t
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(|f| f.is_one())
    }

    pub fn boundaries(&self) -> Vec<Vec<Q>> {
        self.basis
            .iter()
            .zip(&self.factors)
            .filter(|(_, f)| !f.is_zero())
            .map(|(b, f)| b.iter().map(|x| x * Q::from_integer(f.clone())).collect())
            .collect()
    }
}

/// A generator of homology: a cycle and its order (0 when free).
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyClass {
    pub degree: i64,
    pub order: Z,
    pub representative: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyPresentation {
    pub ring: CoefficientRing,
    pub ambient: usize,
    pub per_degree: Vec<DegreeHomology>,
}

impl HomologyPresentation {
    pub fn in_degree(&self, n: i64) -> Option<&DegreeHomology> {
        self.per_degree.iter().find(|d| d.degree == n)
    }

    pub fn free_rank(&self, n: i64) -> usize {
        self.in_degree(n).map_or(0, DegreeHomology::free_rank)
    }

    pub fn torsion(&self, n: i64) -> Vec<Z> {
        self.in_degree(n).map_or(Vec::new(), DegreeHomology::torsion)
    }

    pub fn is_zero(&self) -> bool {
        self.per_degree.iter().all(DegreeHomology::is_zero)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.per_degree.iter().all(|d| d.torsion().is_empty())
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        self.per_degree
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.degree)
            .collect()
    }

    /// Generators in increasing degree.
    pub fn classes(&self) -> Vec<HomologyClass> {
        let mut out = Vec::new();
        for d in &self.per_degree {
            for (b, f) in d.basis.iter().zip(&d.factors) {
                if !f.is_one() {
                    out.push(HomologyClass {
                        degree: d.degree,
                        order: f.clone(),
                        representative: b.clone(),
                    });
                }
            }
        }
        out
    }

    /// Coordinates of the class of a cycle in terms of `classes()`, with
    /// torsion coordinates reduced modulo their orders. `None` if v is not
    /// a cycle.
    pub fn class_of(&self, v: &[Q]) -> Option<Vec<Q>> {
        let lin = self.ring.linear_field().ok()?;
        let mut out = Vec::new();
        for d in &self.per_degree {
            let mut comp = vec![Q::zero(); v.len()];
            for &i in &d.indices {
                comp[i] = v[i].clone();
            }
            if d.basis.is_empty() {
                if comp.iter().any(|x| !x.is_zero()) {
                    return None;
                }
                continue;
            }
            let m = QMatrix::from_rows(&d.basis, v.len());
            let c = field::solve_left(&lin, &m, &comp)?;
            for (x, f) in c.into_iter().zip(&d.factors) {
                if !f.is_one() {
                    out.push(reduce_mod_factor(&self.ring, &x, f)?);
                }
            }
        }
        Some(out)
    }
}

fn reduce_mod_factor(ring: &CoefficientRing, x: &Q, f: &Z) -> Option<Q> {
    if f.is_zero() {
        return Some(ring.reduce(x.clone()));
    }
    let inv = mod_inverse(x.denom(), f)?;
    Some(Q::from_integer((x.numer() * inv).mod_floor(f)))
}

/// Homology of a complex given by degrees and a differential matrix with
/// delta(b_j) in column j.
pub fn homology_of_complex(ring: CoefficientRing, degrees: &[i64], d: &QMatrix) -> Result<HomologyPresentation> {
    let n = degrees.len();
    let mut degs = degrees.to_vec();
    degs.sort_unstable();
    degs.dedup();
    let mut per_degree = Vec::new();
    for &k in &degs {
        let idx: Vec<usize> = (0..n).filter(|&i| degrees[i] == k).collect();
        let prev: Vec<usize> = (0..n).filter(|&i| degrees[i] == k - 1).collect();
        let mut sub = QMatrix::zeros(n, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            for r in 0..n {
                sub[(r, c)] = d[(r, i)].clone();
            }
        }
        let cycles: Vec<Vec<Q>> = kernel_basis(&ring, &sub)?
            .into_iter()
            .map(|k| {
                let mut v = vec![Q::zero(); n];
                for (c, &i) in idx.iter().enumerate() {
                    v[i] = k[c].clone();
                }
                v
            })
            .collect();
        let boundaries: Vec<Vec<Q>> = prev.iter().map(|&i| d.col(i)).collect();
        let mut h = match ring {
            CoefficientRing::Rationals | CoefficientRing::PrimeField(_) => {
                field_degree(ring, k, n, cycles, &boundaries)?
            }
            CoefficientRing::Integers => integer_degree(k, n, cycles, &boundaries, None)?,
            CoefficientRing::LocalizedIntegers(p) => integer_degree(k, n, cycles, &boundaries, Some(p))?,
            CoefficientRing::ResidueRing(_) => return Err(Error::UnsupportedRing(ring.to_string())),
        };
        h.indices = idx;
        per_degree.push(h);
    }
    Ok(HomologyPresentation {
        ring,
        ambient: n,
        per_degree,
    })
}

fn field_degree(
    ring: CoefficientRing,
    k: i64,
    n: usize,
    cycles: Vec<Vec<Q>>,
    boundaries: &[Vec<Q>],
) -> Result<DegreeHomology> {
    let bspace = Subspace::span(ring, n, boundaries)?;
    let mut basis: Vec<Vec<Q>> = bspace.basis().to_vec();
    let mut factors = vec![Z::one(); basis.len()];
    let mut span = bspace;
    for c in cycles {
        if !span.contains(&c) {
            span = span.with(std::slice::from_ref(&c));
            basis.push(c);
            factors.push(Z::zero());
        }
    }
    Ok(DegreeHomology {
        degree: k,
        indices: Vec::new(),
        basis,
        factors,
    })
}

fn integer_degree(
    k: i64,
    n: usize,
    cycles: Vec<Vec<Q>>,
    boundaries: &[Vec<Q>],
    local: Option<u64>,
) -> Result<DegreeHomology> {
    let r = cycles.len();
    if r == 0 {
        return Ok(DegreeHomology {
            degree: k,
            indices: Vec::new(),
            basis: Vec::new(),
            factors: Vec::new(),
        });
    }
    let kmat = QMatrix::from_rows(&cycles, n);
    let qq = CoefficientRing::Rationals;
    let coords: Vec<Vec<Q>> = boundaries
        .iter()
        .map(|b| field::solve_left(&qq, &kmat, b).ok_or(Error::NotAComplex))
        .collect::<Result<_>>()?;
    let den = common_denominator(coords.iter().flatten());
    if local.is_none() && !den.is_one() {
        return Err(Error::InvalidParameter("boundaries are not integral".into()));
    }
    let b = if coords.is_empty() {
        ZMatrix::zeros(0, r)
    } else {
        QMatrix::from_rows(&coords, r).map(|x| (x * Q::from_integer(den.clone())).to_integer())
    };
    let snf = smith_normal_form(&b);
    let w = snf.v.to_q().mul_mat(&kmat);
    let mut factors = Vec::with_capacity(r);
    for i in 0..r {
        let s = if i < snf.s.rows() { snf.s[(i, i)].abs() } else { Z::zero() };
        let s = match local {
            Some(p) if !s.is_zero() => {
                // only the p-part survives over Z_(p)
                let v = valuation(&Q::from_integer(s), p);
                num_traits::pow(Z::from(p), v as usize)
            }
            _ => s,
        };
        factors.push(s);
    }
    Ok(DegreeHomology {
        degree: k,
        indices: Vec::new(),
        basis: w.row_vecs(),
        factors,
    })
}

pub fn homology(m: &DgModule) -> Result<HomologyPresentation> {
    homology_of_complex(m.ring(), m.degrees(), m.differential())
}

pub fn algebra_homology(dg: &DgAlgebra) -> Result<HomologyPresentation> {
    homology_of_complex(dg.ring(), dg.algebra.degrees(), dg.differential.matrix())
}

/// H(A, d) with the product of classes, in class coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyRing {
    pub presentation: HomologyPresentation,
    pub classes: Vec<HomologyClass>,
    /// product[a][b] = class of rep_a * rep_b.
    pub product: Vec<Vec<Vec<Q>>>,
    /// Class of the unit.
    pub unit: Vec<Q>,
}

pub fn homology_ring(dg: &DgAlgebra) -> Result<HomologyRing> {
    let presentation = algebra_homology(dg)?;
    let classes = presentation.classes();
    let mut product = Vec::with_capacity(classes.len());
    for a in &classes {
        let mut row = Vec::with_capacity(classes.len());
        for b in &classes {
            let p = dg.mul(&a.representative, &b.representative);
            row.push(presentation.class_of(&p).ok_or(Error::NotAComplex)?);
        }
        product.push(row);
    }
    let unit = presentation
        .class_of(dg.algebra.unit())
        .ok_or(Error::NotAComplex)?;
    Ok(HomologyRing {
        presentation,
        classes,
        product,
        unit,
    })
}

impl HomologyRing {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Product of two classes given in coordinates, reduced by the orders.
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let ring = self.presentation.ring;
        let mut out = vec![Q::zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (k, c) in self.product[i][j].iter().enumerate() {
                    out[k] += x * y * c;
                }
            }
        }
        out.iter()
            .zip(&self.classes)
            .map(|(x, c)| reduce_mod_factor(&ring, x, &c.order).unwrap_or_else(|| x.clone()))
            .collect()
    }

    /// The homology ring as a graded algebra, when every class is free.
    pub fn to_algebra(&self) -> Result<GradedAlgebra> {
        if self.classes.iter().any(|c| !c.order.is_zero()) {
            return Err(Error::InvalidParameter("homology has torsion".into()));
        }
        let mut entries = Vec::new();
        for (i, row) in self.product.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        let names = (0..self.dim()).map(|i| format!("h{i}")).collect();
        let degrees = self.classes.iter().map(|c| c.degree).collect();
        GradedAlgebra::with_unit(self.presentation.ring, names, degrees, &entries, self.unit.clone())
    }
}

/// H(M) as a module over H(A): action[a][j] = class of rep_a * rep_j.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyModule {
    pub ring: HomologyRing,
    pub presentation: HomologyPresentation,
    pub classes: Vec<HomologyClass>,
    pub action: Vec<Vec<Vec<Q>>>,
}

pub fn homology_module(m: &DgModule) -> Result<HomologyModule> {
    let ring = homology_ring(m.parent())?;
    let presentation = homology(m)?;
    let classes = presentation.classes();
    let mut action = Vec::new();
    for a in &ring.classes {
        let mut row = Vec::new();
        for c in &classes {
            let v = m.act(&a.representative, &c.representative);
            row.push(presentation.class_of(&v).ok_or(Error::NotAComplex)?);
        }
        action.push(row);
    }
    Ok(HomologyModule {
        ring,
        presentation,
        classes,
        action,
    })
}

/// Outcome of the test whether a dg-algebra has a semisimple category of
/// dg-modules: acyclic (1 = d(z)) with semisimple cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimpleCategoryReport {
    pub acyclic: bool,
    /// Some z of degree -1 with d(z) = 1.
    pub witness: Option<Vec<Q>>,
    pub cycles_semisimple: bool,
    /// Bases of the cycles Z(A) and of Z(A) z when acyclic.
    pub decomposition: Option<(Vec<Vec<Q>>, Vec<Vec<Q>>)>,
    /// Whether A = Z(A) + Z(A) z is a direct sum.
    pub direct_sum: bool,
    pub verdict: bool,
}

pub fn semisimple_category_test(dg: &DgAlgebra) -> Result<SemisimpleCategoryReport> {
    let ring = dg.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let a = &dg.algebra;
    let n = a.dim();
    let idx = a.indices_of_degree(-1);
    let dm = dg.differential.matrix();
    let mut sub = QMatrix::zeros(n, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..n {
            sub[(r, c)] = dm[(r, i)].clone();
        }
    }
    let witness = if idx.is_empty() {
        None
    } else {
        field::solve(&ring, &sub, a.unit()).map(|y| {
            let mut z = vec![Q::zero(); n];
            for (c, &i) in idx.iter().enumerate() {
                z[i] = y[c].clone();
            }
            z
        })
    };
    let acyclic = witness.is_some() || n == 0;
    let (cyc, _) = cycles_subalgebra(dg)?;
    let cycles_semisimple = is_semisimple(&cyc)?;
    let mut direct_sum = false;
    let decomposition = witness.as_ref().map(|z| {
        let zs = cycle_basis(dg).expect("field");
        let zz: Vec<Vec<Q>> = zs.iter().map(|c| a.mul(c, z)).collect();
        let s1 = Subspace::span(ring, n, &zs).expect("field");
        let s2 = Subspace::span(ring, n, &zz).expect("field");
        direct_sum = s1.intersect(&s2).is_zero() && s1.dim() + s2.dim() == n;
        (zs, zz)
    });
    Ok(SemisimpleCategoryReport {
        acyclic,
        witness,
        cycles_semisimple,
        decomposition,
        direct_sum,
        verdict: acyclic && cycles_semisimple,
    })
}

/// Semisimplicity of the underlying ungraded algebra.
pub fn algebra_semisimplicity(a: &GradedAlgebra) -> Result<bool> {
    is_semisimple(a)
}
