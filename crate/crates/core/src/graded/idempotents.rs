use num_traits::{One, Zero};

use super::algebra::{DgAlgebra, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{field, is_zero_vec, QMatrix, Subspace};
use crate::poly::Poly;
use crate::ring::{CoefficientRing, Q};

const ROOT_SEARCH_CAP: u64 = 1_000_000;

/// Primitive central idempotents of degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralIdempotents {
    pub primitive: Vec<Vec<Q>>,
    /// False if some block has a center that does not split over the
    /// coefficient field, in which case a block may still decompose.
    pub split: bool,
}

impl CentralIdempotents {
    /// All 2^k sums of distinct primitive idempotents, including 0 and 1.
    pub fn all(&self) -> Vec<Vec<Q>> {
        let k = self.primitive.len();
        let n = self.primitive.first().map_or(0, Vec::len);
        (0..1u64 << k)
            .map(|mask| {
                let mut v = vec![Q::zero(); n];
                for (i, e) in self.primitive.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        for (x, y) in v.iter_mut().zip(e) {
                            *x += y;
                        }
                    }
                }
                v
            })
            .collect()
    }
}

fn working_field(ring: CoefficientRing) -> Result<CoefficientRing> {
    if ring.characteristic().is_multiple_of(2) && ring.characteristic() != 0 {
        return Err(Error::CharTwo);
    }
    ring.linear_field()
}

/// Basis of the degree-0 part of the center.
pub fn center_degree_zero(a: &GradedAlgebra) -> Result<Vec<Vec<Q>>> {
    let lin = working_field(a.ring())?;
    let n = a.dim();
    let idx = a.indices_of_degree(0);
    let mut m = QMatrix::zeros(n * n, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for j in 0..n {
            for (k, v) in a.products(i, j) {
                m[(j * n + k, c)] += v;
            }
            for (k, v) in a.products(j, i) {
                m[(j * n + k, c)] -= v;
            }
        }
    }
    Ok(field::kernel(&lin, &m)
        .into_iter()
        .map(|k| {
            let mut v = vec![Q::zero(); n];
            for (c, &i) in idx.iter().enumerate() {
                v[i] = k[c].clone();
            }
            v
        })
        .collect())
}

/// Horner evaluation of f at b inside the algebra e A e with unit e.
fn eval_at(a: &GradedAlgebra, f: &Poly, b: &[Q], e: &[Q]) -> Vec<Q> {
    let mut acc = vec![Q::zero(); a.dim()];
    for c in f.coeffs().iter().rev() {
        acc = a.mul(&acc, b);
        acc = a.add(&acc, &a.scale(c, e));
    }
    acc
}

/// Minimal polynomial of b in the commutative algebra with unit e.
fn minimal_polynomial(a: &GradedAlgebra, lin: CoefficientRing, b: &[Q], e: &[Q]) -> Poly {
    let mut powers = vec![e.to_vec()];
    loop {
        let next = a.mul(powers.last().expect("nonempty"), b);
        let m = QMatrix::from_rows(&powers, a.dim());
        if let Some(c) = field::solve_left(&lin, &m, &next) {
            let mut coeffs: Vec<Q> = c.iter().map(|x| lin.neg(x)).collect();
            coeffs.push(Q::one());
            return Poly::new(lin, coeffs);
        }
        powers.push(next);
    }
}

enum Split {
    Pieces(Vec<Q>, Vec<Q>),
    Local,
    Unsplit,
}

fn try_split(a: &GradedAlgebra, lin: CoefficientRing, center: &[Vec<Q>], e: &[Q]) -> Split {
    let mut local = true;
    let span: Vec<Vec<Q>> = center.iter().map(|c| a.mul(e, c)).collect();
    let space = Subspace::span(lin, a.dim(), &span).expect("field");
    for b in space.basis() {
        let m = minimal_polynomial(a, lin, b, e);
        let roots = m.roots(ROOT_SEARCH_CAP).unwrap_or_default();
        let Some(r) = roots.first() else {
            local = false;
            continue;
        };
        let mu = m.root_multiplicity(r);
        if mu as i64 == m.degree() {
            continue;
        }
        let mut f = Poly::one(lin);
        for _ in 0..mu {
            f = f.mul(&Poly::linear(lin, r));
        }
        let g = m.div_rem(&f).0;
        let (_, _, v) = Poly::ext_gcd(&f, &g);
        let e1 = eval_at(a, &v.mul(&g), b, e);
        let e2 = a.sub(e, &e1);
        return Split::Pieces(e1, e2);
    }
    if local {
        Split::Local
    } else {
        Split::Unsplit
    }
}

/// Primitive central idempotents of degree 0 of a graded algebra over a
/// field (Z and Z_(p) are read over Q). They are found by splitting the
/// degree-0 center along roots of minimal polynomials.
pub fn central_idempotents(a: &GradedAlgebra) -> Result<CentralIdempotents> {
    let lin = working_field(a.ring())?;
    let work = if a.ring().is_field() {
        a.clone()
    } else {
        a.change_ring(lin)?
    };
    let center = center_degree_zero(&work)?;
    let mut pending = vec![work.unit().to_vec()];
    let mut done = Vec::new();
    let mut split = true;
    while let Some(e) = pending.pop() {
        match try_split(&work, lin, &center, &e) {
            Split::Pieces(e1, e2) => {
                pending.push(e1);
                pending.push(e2);
            }
            Split::Local => done.push(e),
            Split::Unsplit => {
                split = false;
                done.push(e);
            }
        }
    }
    done.sort();
    Ok(CentralIdempotents {
        primitive: done,
        split,
    })
}

/// Central idempotents of a dg-algebra; each one is a cycle.
pub fn central_homogeneous_idempotents(dg: &DgAlgebra) -> Result<CentralIdempotents> {
    let c = central_idempotents(&dg.algebra)?;
    debug_assert!(c.primitive.iter().all(|e| is_zero_vec(&dg.d(e))));
    Ok(c)
}

/// One dg-algebra per primitive central idempotent e, on a homogeneous
/// basis of eA, together with its embedding into A.
pub fn block_decompose(dg: &DgAlgebra) -> Result<Vec<(DgAlgebra, QMatrix)>> {
    let idem = central_homogeneous_idempotents(dg)?;
    let a = &dg.algebra;
    let lin = working_field(a.ring())?;
    let work = if a.ring().is_field() {
        dg.clone()
    } else {
        dg.change_ring(lin)?
    };
    let mut out = Vec::new();
    for e in &idem.primitive {
        let vs: Vec<Vec<Q>> = (0..a.dim())
            .map(|i| work.mul(e, &a.basis_vector(i)))
            .collect();
        let basis = work.algebra.graded_span(&vs)?.basis().to_vec();
        let names = (0..basis.len()).map(|i| format!("f{i}")).collect();
        out.push(work.restrict(&basis, names)?);
    }
    Ok(out)
}
