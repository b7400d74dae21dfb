use num_traits::{One, Zero};

use super::algebra::DgAlgebra;
use crate::linalg::QMatrix;
use crate::ring::Q;

const SEARCH_CAP: u64 = 1_000_000;

/// Searches for a signed-permutation isomorphism of dg-algebras
/// b_i -> s_i c_{pi(i)} that preserves degrees, products, unit and
/// differential. Returns the matrix with the image of b_i in column i.
pub fn find_monomial_isomorphism(a: &DgAlgebra, b: &DgAlgebra) -> Option<QMatrix> {
    let n = a.dim();
    if n != b.dim() || a.ring() != b.ring() {
        return None;
    }
    let mut da = a.algebra.degrees().to_vec();
    let mut db = b.algebra.degrees().to_vec();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let mut search = Search {
        a,
        b,
        perm: Vec::with_capacity(n),
        signs: Vec::with_capacity(n),
        used: vec![false; n],
        steps: 0,
    };
    if !search.extend() {
        return None;
    }
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m[(search.perm[i], i)] = search.signs[i].clone();
    }
    Some(m)
}

struct Search<'a> {
    a: &'a DgAlgebra,
    b: &'a DgAlgebra,
    perm: Vec<usize>,
    signs: Vec<Q>,
    used: Vec<bool>,
    steps: u64,
}

impl Search<'_> {
    fn image(&self, v: &[Q]) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); self.b.dim()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i >= self.perm.len() {
                return None;
            }
            out[self.perm[i]] = self.b.ring().mul(c, &self.signs[i]);
        }
        Some(out)
    }

    /// Checks every relation whose indices are all assigned and involve
    /// the newest index.
    fn consistent(&self) -> bool {
        let k = self.perm.len() - 1;
        let (a, b) = (&self.a.algebra, &self.b.algebra);
        let img = |i: usize| {
            let mut v = vec![Q::zero(); b.dim()];
            v[self.perm[i]] = self.signs[i].clone();
            v
        };
        for i in 0..=k {
            for (x, y) in [(i, k), (k, i)] {
                let prod = a.mul(&a.basis_vector(x), &a.basis_vector(y));
                if let Some(lhs) = self.image(&prod) {
                    if lhs != b.mul(&img(x), &img(y)) {
                        return false;
                    }
                }
            }
        }
        if let Some(lhs) = self.image(&self.a.d(&a.basis_vector(k))) {
            if lhs != self.b.d(&img(k)) {
                return false;
            }
        }
        for i in 0..k {
            if let Some(lhs) = self.image(&self.a.d(&a.basis_vector(i))) {
                if lhs != self.b.d(&img(i)) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self) -> bool {
        let k = self.perm.len();
        if k == self.a.dim() {
            return self.image(self.a.algebra.unit()).as_deref() == Some(self.b.algebra.unit());
        }
        let deg = self.a.algebra.degree(k);
        for t in 0..self.b.dim() {
            if self.used[t] || self.b.algebra.degree(t) != deg {
                continue;
            }
            for s in [Q::one(), -Q::one()] {
                self.steps += 1;
                if self.steps > SEARCH_CAP {
                    return false;
                }
                self.perm.push(t);
                self.signs.push(self.b.ring().reduce(s));
                self.used[t] = true;
                if self.consistent() && self.extend() {
                    return true;
                }
                self.perm.pop();
                self.signs.pop();
                self.used[t] = false;
            }
        }
        false
    }
}

/// Whether the matrix (images of basis vectors in columns) is an
/// isomorphism of dg-algebras.
pub fn is_dg_isomorphism(a: &DgAlgebra, b: &DgAlgebra, f: &QMatrix) -> bool {
    let n = a.dim();
    if f.rows() != b.dim() || f.cols() != n {
        return false;
    }
    let ring = a.ring();
    let Ok(lin) = ring.linear_field() else { return false };
    if crate::linalg::field::det(&lin, f).is_zero() {
        return false;
    }
    let apply = |v: &[Q]| -> Vec<Q> { f.apply(v).into_iter().map(|x| ring.reduce(x)).collect() };
    let alg = &a.algebra;
    if apply(alg.unit()) != b.algebra.unit() {
        return false;
    }
    for i in 0..n {
        let bi = alg.basis_vector(i);
        if a.algebra.homogeneous_degree(&bi) != b.algebra.homogeneous_degree(&apply(&bi)) {
            return false;
        }
        if apply(&a.d(&bi)) != b.d(&apply(&bi)) {
            return false;
        }
        for j in 0..n {
            let bj = alg.basis_vector(j);
            if apply(&alg.mul(&bi, &bj)) != b.algebra.mul(&apply(&bi), &apply(&bj)) {
                return false;
            }
        }
    }
    true
}
