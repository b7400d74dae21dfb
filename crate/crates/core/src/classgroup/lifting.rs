//! Lifting of units across torsion, radicals and homology.

use num_traits::Zero;

use super::finite::ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::graded::{cycle_basis, jacobson_radical, DgAlgebra, GradedAlgebra};
use crate::homology::homology_ring;
use crate::linalg::{field, QMatrix, Subspace};
use crate::ring::{CoefficientRing, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftingOutcome {
    /// Every enumerated unit was lifted to a unit.
    Lifted,
    /// t(B) = 0, so the quotient is B itself.
    Identity,
    /// B / t(B) is the zero ring.
    Degenerate,
    /// The target of the lifting is the zero ring.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingReport {
    pub outcome: LiftingOutcome,
    /// Units of the quotient that were checked.
    pub units: usize,
    /// Units without a lift among the candidates.
    pub failures: usize,
}

impl LiftingReport {
    fn trivial(outcome: LiftingOutcome) -> Self {
        LiftingReport {
            outcome,
            units: 0,
            failures: 0,
        }
    }

    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

/// All vectors over F_p supported on the given coordinates.
fn enumerate(p: u64, n: usize, support: &[usize]) -> Result<Vec<Vec<Q>>> {
    let count = (p as u128).checked_pow(support.len() as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            count,
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for mut k in 0..count as u64 {
        let mut v = vec![Q::zero(); n];
        for &i in support {
            v[i] = Q::from_integer((k % p).into());
            k /= p;
        }
        out.push(v);
    }
    Ok(out)
}

/// Left multiplication by x on B / J, in the coordinates complementary to J.
fn quotient_mult(a: &GradedAlgebra, j: &Subspace, x: &[Q]) -> QMatrix {
    let comp = j.complement_indices();
    let mut m = QMatrix::zeros(comp.len(), comp.len());
    for (c, &i) in comp.iter().enumerate() {
        let v = j.reduce(&a.mul(x, &a.basis_vector(i)));
        for (r, &k) in comp.iter().enumerate() {
            m[(r, c)] = v[k].clone();
        }
    }
    m
}

fn is_unit(a: &GradedAlgebra, x: &[Q]) -> bool {
    !field::det(&a.ring(), &a.left_mult_matrix(x)).is_zero()
}

/// Units of B / t(B) lift to units of B. Over F_p the torsion quotient is
/// replaced by the quotient by the radical, and each unit of B / J is
/// lifted by its representative on the complementary coordinates.
pub fn unit_lifting_checks(b: &GradedAlgebra) -> Result<LiftingReport> {
    match b.ring() {
        CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {
            Ok(LiftingReport::trivial(LiftingOutcome::Identity))
        }
        CoefficientRing::ResidueRing(_) => Ok(LiftingReport::trivial(LiftingOutcome::Degenerate)),
        CoefficientRing::Rationals => Err(Error::UnsupportedRing("Q".into())),
        CoefficientRing::PrimeField(p) => {
            let j = jacobson_radical(b)?;
            let n = b.dim();
            let comp = j.complement_indices();
            let lin = b.ring();
            let mut report = LiftingReport::trivial(LiftingOutcome::Lifted);
            for x in enumerate(p, n, &comp)? {
                if field::det(&lin, &quotient_mult(b, &j, &x)).is_zero() {
                    continue;
                }
                report.units += 1;
                if !is_unit(b, &x) {
                    report.failures += 1;
                }
            }
            Ok(report)
        }
    }
}

/// Units of H(A, d) lift to units of ker(d) for a dg-algebra over F_p:
/// each unit class is represented by a cycle, adjusted by boundaries
/// until it is a unit of the cycle algebra.
pub fn cycle_unit_lifting(dg: &DgAlgebra) -> Result<LiftingReport> {
    let ring = homology_ring(dg)?;
    if ring.dim() == 0 {
        return Ok(LiftingReport::trivial(LiftingOutcome::Vacuous));
    }
    let CoefficientRing::PrimeField(p) = dg.ring() else {
        return Err(Error::NotAField(format!("{} (finite field required)", dg.ring())));
    };
    let a = &dg.algebra;
    let n = a.dim();
    let h = ring.to_algebra()?;
    let cycles = Subspace::span(dg.ring(), n, &cycle_basis(dg)?)?;
    let boundaries: Vec<Vec<Q>> = (0..n).map(|i| dg.d(&a.basis_vector(i))).collect();
    let bspace = Subspace::span(dg.ring(), n, &boundaries)?;
    let shifts = span_elements(p, n, bspace.basis())?;
    let unit_in_cycles = |z: &[Q]| {
        let rows: Vec<Vec<Q>> = cycles.basis().iter().map(|c| a.mul(z, c)).collect();
        let coords: Option<Vec<Vec<Q>>> = rows.iter().map(|r| cycles.coords(r)).collect();
        coords.is_some_and(|c| {
            !field::det(&dg.ring(), &QMatrix::from_rows(&c, cycles.dim())).is_zero()
        })
    };
    let support: Vec<usize> = (0..h.dim()).collect();
    let mut report = LiftingReport::trivial(LiftingOutcome::Lifted);
    for c in enumerate(p, h.dim(), &support)? {
        if !is_unit(&h, &c) {
            continue;
        }
        report.units += 1;
        let mut rep = vec![Q::zero(); n];
        for (x, cl) in c.iter().zip(&ring.classes) {
            rep = a.add(&rep, &a.scale(x, &cl.representative));
        }
        if !shifts.iter().any(|s| unit_in_cycles(&a.add(&rep, s))) {
            report.failures += 1;
        }
    }
    Ok(report)
}

fn span_elements(p: u64, n: usize, basis: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let coeffs = enumerate(p, basis.len(), &(0..basis.len()).collect::<Vec<_>>())?;
    Ok(coeffs
        .into_iter()
        .map(|c| {
            let mut v = vec![Q::zero(); n];
            for (x, b) in c.iter().zip(basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += x * bi;
                }
            }
            v.into_iter()
                .map(|x| CoefficientRing::PrimeField(p).reduce(x))
                .collect()
        })
        .collect())
}
