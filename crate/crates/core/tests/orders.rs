use std::sync::Arc;

use dgorder::catalog::{lambda2, mat2_column, mat2_dx, zp_order};
use dgorder::error::Error;
use dgorder::linalg::ZLattice;
use dgorder::module::DgModule;
use dgorder::orders::{
    check_dg_order, dg_lattice_in_module, dg_maximal_hull, globalize, is_dg_lattice, is_dg_order,
    left_order, localize, modified_primes, right_order, LocalLattice, OrderCheck,
};
use dgorder::ring::{q, qf, CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

fn lat(rows: &[&[Q]]) -> ZLattice {
    let g: Vec<Vec<Q>> = rows.iter().map(|r| r.to_vec()).collect();
    ZLattice::from_generators(rows[0].len(), &g).unwrap()
}

fn mat2z() -> ZLattice {
    ZLattice::standard(4)
}

#[test]
fn integral_matrices_are_dg_orders() {
    for x in [1i64, -1, 2, 3, 6] {
        let dg = mat2_dx(QQ, &q(x)).unwrap();
        let o = is_dg_order(&dg, &mat2z()).unwrap();
        assert_eq!(o.is_proper(), x.abs() == 1, "x = {x}");
        let h = o.homology().unwrap();
        let expected = if x.abs() == 1 { vec![] } else { vec![Z::from(x.abs())] };
        assert_eq!(h.torsion(0), expected);
        assert_eq!(h.torsion(1), expected);
    }
}

#[test]
fn half_differential_is_rejected() {
    let dg = mat2_dx(QQ, &qf(1, 2)).unwrap();
    let r = check_dg_order(&dg, &mat2z()).unwrap();
    assert!(!r.holds(OrderCheck::DStability));
    assert!(r.holds(OrderCheck::RingClosure) && r.holds(OrderCheck::Unit));
    assert_eq!(r.proper, None);
    match is_dg_order(&dg, &mat2z()) {
        Err(Error::NotAnOrder(msg)) => assert!(msg.starts_with("d-stability"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn lambda2_is_an_acyclic_proper_order() {
    let ex = lambda2(&q(2)).unwrap();
    let l = ex.order.unwrap();
    let o = is_dg_order(&ex.dg, &l).unwrap();
    assert!(o.homology().unwrap().is_zero());
    assert!(o.is_proper());
    assert!(o.is_classically_maximal().unwrap());
    assert!(!is_dg_order(&ex.dg, &mat2z()).unwrap().is_proper());
}

#[test]
fn failing_checks_are_named() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let half = lat(&[
        &[q(1), q(0), q(0), q(0)],
        &[q(0), qf(1, 2), q(0), q(0)],
        &[q(0), q(0), q(1), q(0)],
        &[q(0), q(0), q(0), q(1)],
    ]);
    let r = check_dg_order(&dg, &half).unwrap();
    assert!(!r.holds(OrderCheck::Integrality) || !r.holds(OrderCheck::RingClosure));
    let thin = lat(&[&[q(1), q(0), q(0), q(1)]]);
    assert!(!check_dg_order(&dg, &thin).unwrap().holds(OrderCheck::FullRank));
    let mixed = lat(&[
        &[q(1), q(1), q(0), q(0)],
        &[q(0), q(2), q(0), q(0)],
        &[q(0), q(0), q(1), q(0)],
        &[q(0), q(0), q(0), q(1)],
    ]);
    assert!(!check_dg_order(&dg, &mixed).unwrap().holds(OrderCheck::Grading));
}

#[test]
fn conductor_orders() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    assert_eq!(left_order(&dg, &mat2z()).unwrap().lattice(), &mat2z());
    assert_eq!(right_order(&dg, &mat2z()).unwrap().lattice(), &mat2z());
    let ex = lambda2(&q(2)).unwrap();
    let l = ex.order.unwrap();
    assert_eq!(left_order(&ex.dg, &l).unwrap().lattice(), &l);
    assert_eq!(right_order(&ex.dg, &l).unwrap().lattice(), &l);
    // matrices whose first column is divisible by 3
    let col = lat(&[
        &[q(3), q(0), q(0), q(0)],
        &[q(0), q(1), q(0), q(0)],
        &[q(0), q(0), q(3), q(0)],
        &[q(0), q(0), q(0), q(1)],
    ]);
    let o = left_order(&dg, &col).unwrap();
    assert_eq!(o.lattice(), &mat2z());
    let r = right_order(&dg, &col).unwrap();
    for v in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]] {
        assert!(r.lattice().contains(&v.map(q)));
    }
    assert!(!r.lattice().contains(&[q(0), q(0), q(1), q(0)]));
}

#[test]
fn conductor_order_preconditions() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let thin = lat(&[&[q(1), q(0), q(0), q(1)]]);
    assert_eq!(left_order(&dg, &thin).unwrap_err(), Error::NotFull);
    let unstable = lat(&[
        &[q(1), q(0), q(0), q(0)],
        &[q(0), q(2), q(0), q(0)],
        &[q(0), q(0), q(1), q(0)],
        &[q(0), q(0), q(0), q(1)],
    ]);
    assert_eq!(left_order(&dg, &unstable).unwrap_err(), Error::NotDgLattice);
}

#[test]
fn localization_round_trips() {
    let n = ZLattice::standard(3);
    assert_eq!(globalize(&[], &n).unwrap(), n);
    let two_n = n.scale(&q(2));
    let local = localize(&two_n, 2).unwrap();
    let g = globalize(std::slice::from_ref(&local), &n).unwrap();
    assert_eq!(n.index_of(&g).unwrap(), q(8));
    assert_eq!(g, two_n);
    // the 3-part of 6N is trivial
    assert_eq!(localize(&n.scale(&q(6)), 3).unwrap(), localize(&n.scale(&q(3)), 3).unwrap());

    let l = lambda2(&q(2)).unwrap().order.unwrap();
    let primes = modified_primes(&l);
    assert_eq!(primes, vec![2]);
    let data: Vec<LocalLattice> = primes.iter().map(|&p| localize(&l, p).unwrap()).collect();
    assert_eq!(globalize(&data, &ZLattice::standard(4)).unwrap(), l);

    let bad = LocalLattice {
        prime: 5,
        lattice: ZLattice::zero(3),
    };
    assert_eq!(globalize(&[bad], &n).unwrap_err(), Error::InconsistentLocalData(5));
}

#[test]
fn hull_reaches_the_integral_matrices() {
    let ex = zp_order(5, &q(1)).unwrap();
    let o = is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap();
    assert!(!o.is_classically_maximal().unwrap());
    let h = dg_maximal_hull(&o).unwrap();
    assert_eq!(h.order.lattice(), &mat2z());
    assert!(h.classically_maximal);
    assert!(!h.moves.is_empty());
    assert!(h.moves.iter().all(|m| m.prime == 5));
    assert!(h.order.lattice().contains_lattice(o.lattice()));
}

#[test]
fn maximal_orders_are_fixed_by_the_hull() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let o = is_dg_order(&dg, &mat2z()).unwrap();
    let h = dg_maximal_hull(&o).unwrap();
    assert!(h.moves.is_empty() && h.classically_maximal);
    assert_eq!(h.order, o);
    let ex = lambda2(&q(2)).unwrap();
    let o = is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap();
    let h = dg_maximal_hull(&o).unwrap();
    assert!(h.moves.is_empty());
    assert_eq!(h.order, o);
}

#[test]
fn dg_lattices_in_modules() {
    let dg = Arc::new(mat2_dx(QQ, &q(1)).unwrap());
    let o = is_dg_order(&dg, &mat2z()).unwrap();
    let reg = DgModule::regular(dg.clone());
    let l = dg_lattice_in_module(&o, &reg).unwrap();
    assert!(is_dg_lattice(&o, &reg, &l));
    let col = mat2_column(QQ, &q(1)).unwrap();
    let l = dg_lattice_in_module(&o, &col).unwrap();
    assert!(is_dg_lattice(&o, &col, &l));
    assert_eq!(dg_lattice_in_module(&o, &col.shift(3)).unwrap(), l);
    let other = DgModule::regular(Arc::new(mat2_dx(QQ, &q(2)).unwrap()));
    assert!(dg_lattice_in_module(&o, &other).is_err());
}
