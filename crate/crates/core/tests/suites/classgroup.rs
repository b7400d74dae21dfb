//! Randomized checks of units, ideles and the gluing sequences.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use proptest::prelude::*;

use dgorder::catalog::{green_order, lambda2, s3_order, zp_order};
use dgorder::classgroup::{
    cycle_order_basis, homology_class_map, ideal_from_idele, idele_sequence_check, is_free_rank_one,
    Idele, MvSquare,
};
use dgorder::error::Error;
use dgorder::graded::{central_homogeneous_idempotents, DgAlgebra, GradedAlgebra};
use dgorder::linalg::{field, ZLattice};
use dgorder::orders::{is_dg_order, DgOrder};
use dgorder::ring::{q, valuation, CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn order_of(ex: dgorder::catalog::Example) -> DgOrder {
    is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap()
}

fn shipped_orders() -> &'static Vec<DgOrder> {
    static CELL: OnceLock<Vec<DgOrder>> = OnceLock::new();
    CELL.get_or_init(|| {
        let std4 = |x: i64| {
            let dg = dgorder::catalog::mat2_dx(QQ, &q(x)).unwrap();
            is_dg_order(&dg, &ZLattice::standard(4)).unwrap()
        };
        vec![
            std4(1),
            std4(2),
            order_of(lambda2(&q(2)).unwrap()),
            order_of(zp_order(5, &q(1)).unwrap()),
            order_of(zp_order(13, &q(1)).unwrap()),
            order_of(s3_order(&q(1)).unwrap()),
            order_of(green_order(2, 5, &q(1)).unwrap()),
        ]
    })
}

/// Z + p Mat_2(Z) with zero differential and trivial grading.
fn classical_orders() -> &'static Vec<DgOrder> {
    static CELL: OnceLock<Vec<DgOrder>> = OnceLock::new();
    CELL.get_or_init(|| {
        [5u64, 13]
            .iter()
            .map(|&p| {
                let dg = DgAlgebra::trivial(GradedAlgebra::matrix_algebra(QQ, &[0, 0]));
                is_dg_order(&dg, &zp_order(p, &q(1)).unwrap().order.unwrap()).unwrap()
            })
            .collect()
    })
}

fn s3_orders() -> &'static Vec<(DgOrder, Vec<Vec<Q>>)> {
    static CELL: OnceLock<Vec<(DgOrder, Vec<Vec<Q>>)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [1, 2]
            .iter()
            .map(|&x| {
                let o = order_of(s3_order(&q(x)).unwrap());
                let e = central_homogeneous_idempotents(o.algebra()).unwrap().primitive;
                (o, e)
            })
            .collect()
    })
}

/// The inverse of z in A, if z is invertible there.
fn inverse(a: &GradedAlgebra, z: &[Q]) -> Option<Vec<Q>> {
    let m = field::inverse(&QQ, &a.left_mult_matrix(z))?;
    Some(m.apply(a.unit()))
}

/// p-part of the index of Lambda alpha in Lambda: right multiplication by
/// a 2 x 2 matrix scales covolumes by det^2.
fn expected_index(idele: &Idele) -> Q {
    idele.components().iter().fold(Q::one(), |acc, (&p, m)| {
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        let v = valuation(&det, p);
        let pp = Q::from_integer(Z::from(p));
        acc * if v >= 0 { num_traits::pow(pp, 2 * v as usize) } else { num_traits::pow(pp.recip(), 2 * (-v) as usize) }
    })
}

fn idele_strategy() -> impl Strategy<Value = Idele> {
    prop::collection::btree_map(
        prop::sample::select(vec![2u64, 3, 5, 7]),
        prop::collection::vec(-6i64..=6, 4),
        1..=2,
    )
    .prop_filter("invertible components", |m| m.values().all(|v| v[0] * v[3] != v[1] * v[2]))
    .prop_map(|m| {
        let comps: BTreeMap<u64, Vec<Q>> = m.into_iter().map(|(p, v)| (p, v.into_iter().map(q).collect())).collect();
        Idele::new(comps, false)
    })
}

proptest! {
    #![proptest_config(config())]

    fn units_that_are_cycles_are_units_of_the_cycle_order(
        which in 0usize..7,
        coeffs in prop::collection::vec(-2i64..=2, 6),
        shift in -1i64..=1,
    ) {
        let order = &shipped_orders()[which];
        let dg = order.algebra();
        let a = &dg.algebra;
        let cycles = cycle_order_basis(order);
        let mut z = a.scale(&q(shift), a.unit());
        for (c, b) in coeffs.iter().zip(&cycles) {
            z = a.add(&z, &a.scale(&q(*c), b));
        }
        prop_assert!(dg.d(&z).iter().all(Zero::is_zero));
        let Some(inv) = inverse(a, &z) else {
            return Ok(());
        };
        // the inverse of a cycle is a cycle
        prop_assert!(dg.d(&inv).iter().all(Zero::is_zero));
        let unit_of_order = order.contains(&inv);
        let cycle_lattice = ZLattice::from_generators(a.dim(), &cycles).unwrap();
        let unit_of_cycles = cycle_lattice.contains(&inv) && cycle_lattice.contains(&z);
        prop_assert_eq!(unit_of_order, unit_of_cycles);
    }

    fn idele_short_exact_sequence(
        which in 0usize..2,
        alpha in idele_strategy(),
        beta in idele_strategy(),
    ) {
        let order = &classical_orders()[which];
        let r = idele_sequence_check(order, &alpha, &beta).unwrap();
        prop_assert!(r.ranks_match);
        prop_assert!(r.holds, "{:?}", r);
        prop_assert_eq!(&r.index_alpha, &expected_index(&alpha));
        prop_assert_eq!(&r.index_beta, &expected_index(&beta));
        prop_assert_eq!(&r.index_product, &(&r.index_alpha * &r.index_beta));
        // Lambda alpha beta sits in Lambda alpha + Lambda beta when both are integral
        let la = ideal_from_idele(order, &alpha).unwrap().lattice;
        let lb = ideal_from_idele(order, &beta).unwrap().lattice;
        let lab = ideal_from_idele(order, &alpha.mul(order, &beta)).unwrap().lattice;
        if order.lattice().contains_lattice(&la) && order.lattice().contains_lattice(&lb) {
            prop_assert!(la.sum(&lb).contains_lattice(&lab));
        }
    }

    fn pullback_lattices_on_the_s3_order(
        which in 0usize..2,
        idem in 0usize..3,
        pick in 0usize..64,
    ) {
        let (order, ids) = &s3_orders()[which];
        let e = &ids[idem % ids.len()];
        let square = MvSquare::new(order, e).unwrap();
        let units = square.quotient().ring().units().unwrap();
        let u = &units.elements()[pick % units.elements().len()];
        let l = match square.pullback_lattice(u) {
            Ok(l) => l,
            Err(Error::InvalidParameter(_)) => return Ok(()),
            Err(other) => return Err(TestCaseError::fail(format!("{other}"))),
        };
        let a = &order.algebra().algebra;
        let f = a.sub(a.unit(), e);
        prop_assert!(l.dg_stable);
        prop_assert!(l.locally_free);
        // restrictions to both components are trivial
        let proj = |x: &[Q], lat: &ZLattice| -> ZLattice {
            let gens: Vec<Vec<Q>> = lat.basis().iter().map(|b| a.mul(b, x)).collect();
            ZLattice::from_generators(a.dim(), &gens).unwrap()
        };
        prop_assert_eq!(proj(e, &l.lattice), square.lambda_e.clone());
        prop_assert_eq!(proj(&f, &l.lattice), square.lambda_f.clone());
        prop_assert_eq!(order.lattice().index_of(&l.lattice).unwrap(), Q::one());
        // every unit of the quotient comes from the components here, so
        // the glued lattice is free and its homology class is trivial
        prop_assert!(is_free_rank_one(order, &l).unwrap().is_free());
        let h = homology_class_map(order, &l).unwrap();
        prop_assert!(h.torsion_matches);
        prop_assert!(h.class.is_trivial());
    }
}

pub const SUITES: &[(&str, fn())] = &[
    ("units_that_are_cycles_are_units_of_the_cycle_order", units_that_are_cycles_are_units_of_the_cycle_order),
    ("idele_short_exact_sequence", idele_short_exact_sequence),
    ("pullback_lattices_on_the_s3_order", pullback_lattices_on_the_s3_order),
];
