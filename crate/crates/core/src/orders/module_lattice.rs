use num_integer::Integer;
use num_traits::{One, Zero};

use super::DgOrder;
use crate::error::{Error, Result};
use crate::linalg::{field, ZLattice};
use crate::module::DgModule;
use crate::ring::{CoefficientRing, Q, Z};

/// Least positive integer r with r x in the Q-span lattice `l`, for
/// vectors in that span.
fn clearing_multiple(l: &ZLattice, xs: &[Vec<Q>]) -> Z {
    if xs.is_empty() || l.rank() == 0 {
        return Z::one();
    }
    let basis = l.basis_matrix();
    let mut r = Z::one();
    for x in xs {
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        let c = field::solve_left(&CoefficientRing::Rationals, &basis, x)
            .expect("vector in the span of the lattice");
        for ci in c {
            r = r.lcm(ci.denom());
        }
    }
    r
}

fn products(v: &DgModule, elems: &[&Vec<Q>], xs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    elems
        .iter()
        .flat_map(|lam| xs.iter().map(move |x| v.act(lam, x)))
        .collect()
}

/// A full lattice L in V with delta(L) in L and Lambda L in L, built degree
/// by degree from the top: each new degree is a Lambda_0-lattice scaled so
/// that delta and the positive part of Lambda land in what is already
/// built, and the result is closed up under Lambda at the end.
pub fn dg_lattice_in_module(order: &DgOrder, v: &DgModule) -> Result<ZLattice> {
    if **v.parent() != **order.algebra() {
        return Err(Error::InvalidParameter(
            "module is over a different algebra than the order".into(),
        ));
    }
    let m = v.dim();
    let zero_part: Vec<&Vec<Q>> = order
        .basis()
        .iter()
        .zip(order.degrees())
        .filter(|(_, &d)| d == 0)
        .map(|(b, _)| b)
        .collect();
    let positive: Vec<&Vec<Q>> = order
        .basis()
        .iter()
        .zip(order.degrees())
        .filter(|(_, &d)| d > 0)
        .map(|(b, _)| b)
        .collect();
    let mut degrees = v.degree_list();
    degrees.reverse();
    let mut built = ZLattice::zero(m);
    for deg in degrees {
        let std: Vec<Vec<Q>> = v
            .indices_of_degree(deg)
            .into_iter()
            .map(|i| v.basis_vector(i))
            .collect();
        let mut gens = std.clone();
        gens.extend(products(v, &zero_part, &std));
        let hat = ZLattice::from_generators(m, &gens)?;
        let hat_basis = hat.basis();
        let mut images: Vec<Vec<Q>> = hat_basis.iter().map(|x| v.delta(x)).collect();
        images.extend(products(v, &positive, &hat_basis));
        let r = clearing_multiple(&built, &images);
        built = built.sum(&hat.scale(&Q::from_integer(r)));
    }
    let all: Vec<&Vec<Q>> = order.basis().iter().collect();
    let closure = products(v, &all, &built.basis());
    let l = ZLattice::from_generators(m, &closure)?;
    debug_assert!(is_dg_lattice(order, v, &l));
    Ok(l)
}

/// Full, stable under delta and under the order.
pub fn is_dg_lattice(order: &DgOrder, v: &DgModule, l: &ZLattice) -> bool {
    if !l.is_full() {
        return false;
    }
    let basis = l.basis();
    basis.iter().all(|x| l.contains(&v.delta(x)))
        && order
            .basis()
            .iter()
            .all(|lam| basis.iter().all(|x| l.contains(&v.act(lam, x))))
}
