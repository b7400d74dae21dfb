use num_traits::Zero;

use super::algebra::{DgAlgebra, Differential, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::is_zero_vec;
use crate::report::{Axiom, VerificationReport};
use crate::ring::Q;

fn basis_product(a: &GradedAlgebra, i: usize, j: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); a.dim()];
    for (k, c) in a.products(i, j) {
        v[*k] = c.clone();
    }
    v
}

fn first_associativity_failure(a: &GradedAlgebra) -> Option<Vec<usize>> {
    let n = a.dim();
    let ring = a.ring();
    for i in 0..n {
        for j in 0..n {
            let ij = a.products(i, j);
            for k in 0..n {
                let mut lhs = vec![Q::zero(); n];
                for (l, c) in ij {
                    for (m, e) in a.products(*l, k) {
                        lhs[*m] += c * e;
                    }
                }
                let mut rhs = vec![Q::zero(); n];
                for (l, c) in a.products(j, k) {
                    for (m, e) in a.products(i, *l) {
                        rhs[*m] += c * e;
                    }
                }
                let differs = lhs
                    .into_iter()
                    .zip(rhs)
                    .any(|(x, y)| !ring.reduce(x - y).is_zero());
                if differs {
                    return Some(vec![i, j, k]);
                }
            }
        }
    }
    None
}

fn first_unit_failure(a: &GradedAlgebra) -> Option<Vec<usize>> {
    let ring = a.ring();
    (0..a.dim()).find_map(|i| {
        let b = a.basis_vector(i);
        let left = a.mul(a.unit(), &b);
        let right = a.mul(&b, a.unit());
        let ok = left.iter().zip(&right).zip(&b).all(|((l, r), x)| {
            ring.reduce(l - x).is_zero() && ring.reduce(r - x).is_zero()
        });
        (!ok).then(|| vec![i])
    })
}

fn first_grading_failure(a: &GradedAlgebra) -> Option<Vec<usize>> {
    a.entries()
        .into_iter()
        .find(|(i, j, k, _)| a.degree(*k) != a.degree(*i) + a.degree(*j))
        .map(|(i, j, k, _)| vec![i, j, k])
}

/// Checks a graded algebra without a differential.
pub fn verify_graded_algebra(a: &GradedAlgebra) -> VerificationReport {
    let mut r = VerificationReport::default();
    r.record(Axiom::Associativity, first_associativity_failure(a));
    r.record(Axiom::Unit, first_unit_failure(a));
    r.record(Axiom::Grading, first_grading_failure(a));
    r
}

/// Checks every dg-algebra axiom, recording a violating basis tuple for
/// each one that fails.
pub fn verify_dg_algebra(a: &GradedAlgebra, d: &Differential) -> Result<VerificationReport> {
    let n = a.dim();
    let dm = d.matrix();
    if dm.rows() != n || dm.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: dm.rows().max(dm.cols()),
        });
    }
    let ring = a.ring();
    let mut r = verify_graded_algebra(a);

    let deg_fail = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !ring.reduce(dm[(j, i)].clone()).is_zero() && a.degree(j) != a.degree(i) + 1)
        .map(|(i, j)| vec![i, j]);
    r.record(Axiom::DegreePlusOne, deg_fail);

    let sq_fail = (0..n)
        .find(|&i| !is_zero_vec(&d.apply(&ring, &d.apply(&ring, &a.basis_vector(i)))))
        .map(|i| vec![i]);
    r.record(Axiom::SquareZero, sq_fail);

    let images: Vec<Vec<Q>> = (0..n).map(|i| d.apply(&ring, &a.basis_vector(i))).collect();
    let mut leibniz_fail = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(&ring, &basis_product(a, i, j));
            let t1 = a.mul(&images[i], &a.basis_vector(j));
            let t2 = a.mul(&a.basis_vector(i), &images[j]);
            let sign = if a.degree(i).rem_euclid(2) == 1 { -1 } else { 1 };
            let bad = (0..n).any(|k| {
                let rhs = &t1[k] + Q::from_integer(sign.into()) * &t2[k];
                !ring.reduce(&lhs[k] - rhs).is_zero()
            });
            if bad {
                leibniz_fail = Some(vec![i, j]);
                break 'outer;
            }
        }
    }
    r.record(Axiom::Leibniz, leibniz_fail);

    let d1 = d.apply(&ring, a.unit());
    let unit_fail = d1
        .iter()
        .position(|x| !x.is_zero())
        .map(|k| vec![k]);
    r.record(Axiom::DifferentialOfUnit, unit_fail);
    Ok(r)
}

impl DgAlgebra {
    pub fn verify(&self) -> VerificationReport {
        verify_dg_algebra(&self.algebra, &self.differential).expect("square differential")
    }
}
