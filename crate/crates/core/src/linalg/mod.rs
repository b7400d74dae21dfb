//! Exact linear algebra over Q, Z, Z_(p) and F_p.

pub mod field;
pub mod integer;
pub mod lattice;
pub mod matrix;

pub use field::{rref, Subspace};
pub use integer::{hermite_normal_form, integer_det, integer_kernel, smith_normal_form, Hermite, Smith};
pub use lattice::{integral_solutions, rational_solutions, ZLattice};
pub use matrix::{dot, is_zero_vec, unit_vector, vec_add, vec_scale, vec_sub, Matrix, QMatrix, ZMatrix};

use crate::error::{Error, Result};
use crate::ring::{CoefficientRing, Q};

/// Kernel basis of `m` (vectors v with m v = 0). Over a field this is the
/// echelon-derived basis; over Z or Z_(p) it is a basis of the saturated
/// integer kernel.
pub fn kernel_basis(ring: &CoefficientRing, m: &QMatrix) -> Result<Vec<Vec<Q>>> {
    match ring {
        CoefficientRing::Rationals | CoefficientRing::PrimeField(_) => Ok(field::kernel(ring, m)),
        CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {
            let d = crate::ring::common_denominator(m.entries());
            let z = m
                .map(|x| (x * Q::from_integer(d.clone())).to_integer());
            Ok(integer_kernel(&z)
                .into_iter()
                .map(|v| v.into_iter().map(Q::from_integer).collect())
                .collect())
        }
        CoefficientRing::ResidueRing(_) => Err(Error::UnsupportedRing(ring.to_string())),
    }
}

/// Hermite-form basis of the intersection of two lattices.
pub fn lattice_intersect(a: &ZLattice, b: &ZLattice) -> ZLattice {
    a.intersect(b)
}

/// Reduce an integer matrix modulo m, giving a matrix over Z/m.
pub fn reduce_mod(mat: &ZMatrix, m: u64) -> Result<QMatrix> {
    let ring = CoefficientRing::residue(m)?;
    Ok(mat.map(|x| ring.reduce(Q::from_integer(x.clone()))))
}
