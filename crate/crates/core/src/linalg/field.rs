//! Gaussian elimination over Q or F_p.

use num_traits::{One, Zero};

use super::matrix::QMatrix;
use crate::error::{Error, Result};
use crate::ring::{CoefficientRing, Q};

fn require_field(ring: &CoefficientRing) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::NotAField(ring.to_string()))
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(ring: &CoefficientRing, m: &QMatrix) -> (QMatrix, Vec<usize>) {
    assert!(ring.is_field(), "rref needs a field");
    let mut a = m.map(|x| ring.reduce(x.clone()));
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = ring.inv(&a[(r, c)]).expect("nonzero element of a field");
        for j in c..cols {
            a[(r, j)] = ring.mul(&a[(r, j)], &inv);
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let t = ring.mul(&f, &a[(r, j)]);
                    a[(i, j)] = ring.sub(&a[(i, j)], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(ring: &CoefficientRing, m: &QMatrix) -> usize {
    rref(ring, m).1.len()
}

/// Basis of {v : M v = 0}, one vector per free column.
pub fn kernel(ring: &CoefficientRing, m: &QMatrix) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(ring, m);
    let cols = m.cols();
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[f] = Q::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = ring.neg(&r[(row, f)]);
        }
        out.push(v);
    }
    out
}

/// Basis of {x : x M = 0}.
pub fn left_kernel(ring: &CoefficientRing, m: &QMatrix) -> Vec<Vec<Q>> {
    kernel(ring, &m.transpose())
}

/// Some x with M x = b.
pub fn solve(ring: &CoefficientRing, m: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(b.len(), m.rows());
    let aug = m.hstack(&QMatrix::from_rows(&b.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1));
    let (r, pivots) = rref(ring, &aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![Q::zero(); m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// Some x with x M = b, i.e. b as a combination of the rows of M.
pub fn solve_left(ring: &CoefficientRing, m: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    solve(ring, &m.transpose(), b)
}

pub fn inverse(ring: &CoefficientRing, m: &QMatrix) -> Option<QMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&QMatrix::identity(n));
    let (r, pivots) = rref(ring, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)].clone();
        }
    }
    Some(inv)
}

pub fn det(ring: &CoefficientRing, m: &QMatrix) -> Q {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.map(|x| ring.reduce(x.clone()));
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            d = ring.neg(&d);
        }
        d = ring.mul(&d, &a[(c, c)]);
        let inv = ring.inv(&a[(c, c)]).expect("field");
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = ring.mul(&a[(i, c)], &inv);
            for j in c..n {
                let t = ring.mul(&f, &a[(c, j)]);
                a[(i, j)] = ring.sub(&a[(i, j)], &t);
            }
        }
    }
    d
}

/// Characteristic polynomial det(t - M) over Q, coefficients from the
/// constant term up, by the Faddeev-LeVerrier recursion.
pub fn charpoly(m: &QMatrix) -> Vec<Q> {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = M M_{k-1} + c_{n-k+1} I
        let mut next = m.mul_mat(&mk);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        let amk = m.mul_mat(&next);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + &amk[(i, i)]);
        coeffs[n - k] = -tr / Q::from_integer((k as i64).into());
        mk = next;
    }
    coeffs
}

/// A subspace of K^n stored by its reduced echelon basis, which makes
/// equality of subspaces plain equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ring: CoefficientRing,
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ring: CoefficientRing, ambient: usize) -> Self {
        Subspace {
            ring,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ring: CoefficientRing, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| super::matrix::unit_vector(ambient, i))
            .collect();
        Subspace {
            ring,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ring: CoefficientRing, ambient: usize, vectors: &[Vec<Q>]) -> Result<Self> {
        require_field(&ring)?;
        if vectors.is_empty() {
            return Ok(Self::zero(ring, ambient));
        }
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let (r, pivots) = rref(&ring, &QMatrix::from_rows(vectors, ambient));
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace {
            ring,
            ambient,
            basis,
            pivots,
        })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut w: Vec<Q> = v.iter().map(|x| self.ring.reduce(x.clone())).collect();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let f = w[pc].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj = self.ring.sub(wj, &self.ring.mul(&f, rj));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the echelon basis.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .map(|&pc| self.ring.reduce(v[pc].clone()))
                .collect(),
        )
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ring, self.ambient, &vs).expect("field")
    }

    pub fn with(&self, vectors: &[Vec<Q>]) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(vectors.iter().cloned());
        Subspace::span(self.ring, self.ambient, &vs).expect("field")
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ring, self.ambient);
        }
        // x * B1 = y * B2 gives the common vectors
        let b1 = QMatrix::from_rows(&self.basis, self.ambient);
        let b2 = QMatrix::from_rows(&other.basis, self.ambient);
        let stacked = b1.vstack(&b2.negated());
        let vs: Vec<Vec<Q>> = left_kernel(&self.ring, &stacked)
            .into_iter()
            .map(|k| {
                let x = &k[..self.dim()];
                b1.left_apply(x)
            })
            .collect();
        Subspace::span(self.ring, self.ambient, &vs).expect("field")
    }

    /// Standard basis vectors completing this subspace to the whole space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }
}
