//! Finitely generated Z-submodules of Q^n in canonical form.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field;
use super::integer::{hermite_normal_form, integer_det, integer_left_kernel};
use super::matrix::{QMatrix, ZMatrix};
use crate::error::{Error, Result};
use crate::ring::{common_denominator, CoefficientRing, Q, Z};

/// A lattice stored as `hnf / den`, where `den` is the least integer that
/// makes the lattice integral and `hnf` is the Hermite form of the scaled
/// generators. Both are invariants of the lattice, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZLattice {
    ambient: usize,
    den: Z,
    hnf: ZMatrix,
}

impl ZLattice {
    pub fn zero(ambient: usize) -> Self {
        ZLattice {
            ambient,
            den: Z::one(),
            hnf: ZMatrix::zeros(0, ambient),
        }
    }

    /// Z^n.
    pub fn standard(ambient: usize) -> Self {
        ZLattice {
            ambient,
            den: Z::one(),
            hnf: ZMatrix::identity(ambient),
        }
    }

    pub fn from_generators(ambient: usize, gens: &[Vec<Q>]) -> Result<Self> {
        for g in gens {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: g.len(),
                });
            }
        }
        let den = common_denominator(gens.iter().flatten());
        let rows: Vec<Vec<Z>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
            .collect();
        Ok(Self::from_scaled(ambient, &rows, den))
    }

    pub fn from_integer_rows(ambient: usize, rows: &[Vec<Z>]) -> Self {
        Self::from_scaled(ambient, rows, Z::one())
    }

    fn from_scaled(ambient: usize, rows: &[Vec<Z>], den: Z) -> Self {
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        let h = hermite_normal_form(&ZMatrix::from_rows(rows, ambient));
        let basis = h.basis_rows();
        // the recorded denominator may not be minimal once rows combine
        let mut g = den.clone();
        for x in basis.iter().flatten() {
            g = num_integer::Integer::gcd(&g, x);
        }
        let (den, basis) = if g.is_one() || g.is_zero() {
            (den, basis)
        } else {
            let basis = basis
                .into_iter()
                .map(|r| r.into_iter().map(|x| x / &g).collect())
                .collect();
            (den / &g, basis)
        };
        let hnf = if basis.is_empty() {
            ZMatrix::zeros(0, ambient)
        } else {
            hermite_normal_form(&ZMatrix::from_rows(&basis, ambient)).h
        };
        ZLattice { ambient, den, hnf }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.hnf.rows()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient
    }

    pub fn denominator(&self) -> &Z {
        &self.den
    }

    pub fn integer_basis(&self) -> &ZMatrix {
        &self.hnf
    }

    pub fn basis(&self) -> Vec<Vec<Q>> {
        let d = Q::from_integer(self.den.clone());
        (0..self.rank())
            .map(|i| {
                self.hnf
                    .row(i)
                    .iter()
                    .map(|x| Q::from_integer(x.clone()) / &d)
                    .collect()
            })
            .collect()
    }

    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_rows(&self.basis(), self.ambient)
    }

    /// Integer coordinates of `v` in the canonical basis.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Z>> {
        assert_eq!(v.len(), self.ambient);
        let d = Q::from_integer(self.den.clone());
        let mut w: Vec<Q> = v.iter().map(|x| x * &d).collect();
        if w.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let mut out = Vec::with_capacity(self.rank());
        let mut col = 0;
        for i in 0..self.rank() {
            while self.hnf[(i, col)].is_zero() {
                if !w[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let piv = Q::from_integer(self.hnf[(i, col)].clone());
            let c = &w[col] / &piv;
            if !c.is_integer() {
                return None;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                let e = &self.hnf[(i, j)];
                if !e.is_zero() {
                    *wj -= &c * Q::from_integer(e.clone());
                }
            }
            out.push(c.to_integer());
            col += 1;
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        let mut g = self.basis();
        g.extend(other.basis());
        ZLattice::from_generators(self.ambient, &g).expect("same ambient")
    }

    pub fn scale(&self, c: &Q) -> ZLattice {
        let g: Vec<Vec<Q>> = self
            .basis()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * c).collect())
            .collect();
        ZLattice::from_generators(self.ambient, &g).expect("same ambient")
    }

    /// Image under v -> v * m (row vectors).
    pub fn map_rows(&self, m: &QMatrix) -> ZLattice {
        let g: Vec<Vec<Q>> = self.basis().iter().map(|b| m.left_apply(b)).collect();
        ZLattice::from_generators(m.cols(), &g).expect("shape")
    }

    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.ambient, other.ambient);
        if self.rank() == 0 || other.rank() == 0 {
            return ZLattice::zero(self.ambient);
        }
        let d = num_integer::Integer::lcm(&self.den, &other.den);
        let scale = |l: &ZLattice| -> ZMatrix {
            let f = &d / &l.den;
            l.hnf.map(|x| x * &f)
        };
        let b1 = scale(self);
        let b2 = scale(other);
        let stacked = b1.vstack(&b2.negated());
        let gens: Vec<Vec<Z>> = integer_left_kernel(&stacked)
            .into_iter()
            .map(|k| b1.left_apply(&k[..b1.rows()]))
            .collect();
        ZLattice::from_scaled(self.ambient, &gens, d)
    }

    /// Absolute determinant of the basis, for full lattices.
    pub fn covolume(&self) -> Result<Q> {
        if !self.is_full() {
            return Err(Error::NotFull);
        }
        let det = integer_det(&self.hnf).abs();
        let n = self.ambient as u32;
        Ok(Q::new(det, num_traits::pow(self.den.clone(), n as usize)))
    }

    /// Generalized index [self : other] = covol(other) / covol(self).
    pub fn index_of(&self, other: &ZLattice) -> Result<Q> {
        Ok(other.covolume()? / self.covolume()?)
    }

    /// {v : v . b in Z for all b in self}, for full lattices.
    pub fn dual(&self) -> Result<ZLattice> {
        if !self.is_full() {
            return Err(Error::NotFull);
        }
        let inv = field::inverse(&CoefficientRing::Rationals, &self.basis_matrix())
            .expect("full rank");
        Ok(ZLattice::from_generators(self.ambient, &inv.transpose().row_vecs()).expect("shape"))
    }

    /// {v in Z^n : v in self}.
    pub fn integral_part(&self) -> ZLattice {
        self.intersect(&ZLattice::standard(self.ambient))
    }
}

/// {c in Z^r : c * m in Z^k} for an r x k rational matrix.
pub fn integral_solutions(m: &QMatrix) -> ZLattice {
    let r = m.rows();
    let k = m.cols();
    let d = common_denominator(m.entries());
    let scaled = m.map(|x| (x * Q::from_integer(d.clone())).to_integer());
    let stacked = scaled.vstack(&ZMatrix::identity(k).map(|x| x * &d));
    let gens: Vec<Vec<Z>> = integer_left_kernel(&stacked)
        .into_iter()
        .map(|v| v[..r].to_vec())
        .collect();
    ZLattice::from_integer_rows(r, &gens)
}

/// {c in Q^r : c * m in Z^k}; requires m to have rank r.
pub fn rational_solutions(m: &QMatrix) -> Result<ZLattice> {
    let cols = m.transpose().row_vecs();
    let l = ZLattice::from_generators(m.rows(), &cols)?;
    l.dual()
}

impl fmt::Display for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/{}) {}", self.den, self.hnf)
    }
}
