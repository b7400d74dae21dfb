use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use dgorder::catalog::{dual_numbers, lambda2, mat2_dx, s3_order, zp_order};
use dgorder::classgroup::{
    cl_hi_sequence, class_group_conductor_square, classical_maximal_order, cycle_unit_lifting,
    dg_idele_class_group, homology_class_map, ideal_from_idele, idele_sequence_check, is_free_rank_one,
    mv_exactness_check, mv_pullback_lattice, MvSquare, unit_cycle_identity, unit_lifting_checks, CycleOrderKind,
    FiniteAbelianGroup, FiniteRing, Freeness, HomologyClass, Idele, LatticeQuotient, LiftingOutcome,
    NotFreeCertificate, ReducedNormClassGroup, UPPER_BOUND_CAVEAT,
};
use dgorder::error::Error;
use dgorder::graded::{DgAlgebra, GradedAlgebra};
use dgorder::linalg::{unit_vector, ZLattice};
use dgorder::orders::{is_dg_order, DgOrder};
use dgorder::ring::{q, CoefficientRing, Q};

const QQ: CoefficientRing = CoefficientRing::Rationals;

fn v(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&x| q(x)).collect()
}

fn zp(p: u64, x: i64) -> DgOrder {
    let ex = zp_order(p, &q(x)).unwrap();
    is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap()
}

/// Z + p Mat_2(Z) with zero differential and trivial grading.
fn zp_classical(p: u64) -> DgOrder {
    let dg = DgAlgebra::trivial(GradedAlgebra::matrix_algebra(QQ, &[0, 0]));
    let l = zp_order(p, &q(1)).unwrap().order.unwrap();
    is_dg_order(&dg, &l).unwrap()
}

fn s3() -> DgOrder {
    let ex = s3_order(&q(1)).unwrap();
    is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap()
}

fn mat2_ring(p: u64) -> FiniteRing {
    let mut table = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (a, b) = (i / 2, i % 2);
            let (c, d) = (j / 2, j % 2);
            let mut t = vec![0u64; 4];
            if b == c {
                t[2 * a + d] = 1;
            }
            table.push(t);
        }
    }
    FiniteRing::new(vec![p; 4], table, vec![1, 0, 0, 1]).unwrap()
}

#[test]
fn cyclic_unit_group() {
    let r = FiniteRing::diagonal(7, 1).unwrap();
    let u = r.units().unwrap();
    assert_eq!(u.order(), 6);
    assert_eq!(u.abelianization(), FiniteAbelianGroup::from_cyclic_factors(&[6]));
}

#[test]
fn general_linear_group_over_f3() {
    // brute-force count of invertible matrices
    let mut count = 0;
    for k in 0..81u64 {
        let (a, b, c, d) = (k % 3, (k / 3) % 3, (k / 9) % 3, k / 27);
        if (a * d + 9 - (b * c) % 3) % 3 != 0 {
            count += 1;
        }
    }
    let u = mat2_ring(3).units().unwrap();
    assert_eq!(u.order(), count);
    assert_eq!(count, 48);
    // the determinant maps onto F3^x with perfect-free kernel quotient
    assert_eq!(u.abelianization(), FiniteAbelianGroup::from_cyclic_factors(&[2]));
    assert_eq!(u.commutator_subgroup().order(), 24);
}

#[test]
fn quotient_of_the_order_by_the_conductor() {
    let o = zp(5, 1);
    let a = &o.algebra().algebra;
    let inner = ZLattice::standard(4).scale(&q(5));
    let quot = LatticeQuotient::new(a, o.lattice(), &inner, a.unit()).unwrap();
    assert_eq!(quot.ring().size(), 5);
    assert_eq!(quot.ring().units().unwrap().order(), 4);
    assert_eq!(quot.reduce(&v(&[6, 0, 0, 6])), Some(vec![1]));
    assert_eq!(quot.reduce(&v(&[1, 0, 0, 0])), None);
}

#[test]
fn conductor_square_class_groups() {
    for (p, expected) in [(3u64, 1u128), (5, 2), (7, 1), (13, 2)] {
        let start = Instant::now();
        let o = zp(p, 1);
        let gamma = classical_maximal_order(&o).unwrap();
        assert_eq!(gamma.lattice(), &ZLattice::standard(4));
        let r = class_group_conductor_square(&o, &gamma).unwrap();
        assert_eq!(r.group.order(), expected, "p = {p}");
        assert_eq!(r.conductor, p);
        let gl2 = (p * p - 1) * (p * p - p);
        assert_eq!(r.unit_group_order as u64, gl2);
        if p == 13 {
            assert!(start.elapsed() < Duration::from_secs(10));
        }
    }
}

#[test]
fn maximal_order_has_trivial_class_group() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let o = is_dg_order(&dg, &ZLattice::standard(4)).unwrap();
    let r = class_group_conductor_square(&o, &o).unwrap();
    assert!(r.group.is_trivial());
    assert_eq!(r.conductor, 1);
}

#[test]
fn non_maximal_outer_order_is_rejected() {
    let o = zp(5, 1);
    assert!(matches!(
        class_group_conductor_square(&o, &o),
        Err(Error::UnsupportedConductor(_))
    ));
}

#[test]
fn reduced_norm_group_agrees() {
    for p in [3u64, 5, 7, 13] {
        let o = zp(p, 1);
        let gamma = classical_maximal_order(&o).unwrap();
        let square = class_group_conductor_square(&o, &gamma).unwrap();
        let nrd = ReducedNormClassGroup::new(&o, &gamma).unwrap();
        assert_eq!(nrd.group(), square.group, "p = {p}");
    }
}

#[test]
fn dg_idele_class_groups_are_trivial() {
    for p in [5u64, 13] {
        let r = dg_idele_class_group(&zp(p, 1)).unwrap();
        assert!(r.upper_bound.is_trivial());
        assert_eq!(r.exact, Some(FiniteAbelianGroup::trivial()));
        assert_eq!(r.kind, CycleOrderKind::Commutative { reduced_rank: 1 });
        assert!(r.caveats.iter().any(|c| c == UPPER_BOUND_CAVEAT));
    }
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let r = dg_idele_class_group(&is_dg_order(&dg, &ZLattice::standard(4)).unwrap()).unwrap();
    assert!(r.upper_bound.is_trivial());
    // the cycle order is Z 1 + Z e12
    assert_eq!(r.cycle_rank, 2);
}

#[test]
fn classical_reduction_of_the_dg_group() {
    let r = dg_idele_class_group(&zp_classical(5)).unwrap();
    assert_eq!(r.kind, CycleOrderKind::Classical);
    assert_eq!(r.upper_bound, FiniteAbelianGroup::from_cyclic_factors(&[2]));
    assert_eq!(r.exact, Some(FiniteAbelianGroup::from_cyclic_factors(&[2])));
}

#[test]
fn ideals_from_ideles() {
    let o = zp(5, 1);
    let l = ideal_from_idele(&o, &Idele::trivial(true)).unwrap();
    assert_eq!(&l.lattice, o.lattice());

    // Z in Q with the idele p -> p
    let z = DgAlgebra::trivial(GradedAlgebra::ground(QQ));
    let zo = is_dg_order(&z, &ZLattice::standard(1)).unwrap();
    let l = ideal_from_idele(&zo, &Idele::principal(&[7], &v(&[7]), true)).unwrap();
    assert_eq!(l.lattice, ZLattice::standard(1).scale(&q(7)));

    let singular = Idele::principal(&[5], &v(&[1, 0, 0, 0]), false);
    assert_eq!(ideal_from_idele(&o, &singular).unwrap_err(), Error::NonUnitComponent(5));
    let not_cycle = Idele::principal(&[5], &v(&[2, 0, 0, 1]), true);
    assert!(matches!(ideal_from_idele(&o, &not_cycle), Err(Error::InvalidParameter(_))));
}

#[test]
fn principal_ideles_give_free_lattices() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let o = is_dg_order(&dg, &ZLattice::standard(4)).unwrap();
    let l = ideal_from_idele(&o, &Idele::principal(&[2], &v(&[2, 0, 0, 2]), true)).unwrap();
    assert_eq!(l.lattice, ZLattice::standard(4).scale(&q(2)));
    match is_free_rank_one(&o, &l).unwrap() {
        Freeness::Free { generator } => assert_eq!(generator, v(&[2, 0, 0, 2])),
        other => panic!("{other:?}"),
    }
    let unit = ideal_from_idele(&o, &Idele::trivial(true)).unwrap();
    assert!(is_free_rank_one(&o, &unit).unwrap().is_free());
}

#[test]
fn nontrivial_class_is_not_free() {
    let o = zp_classical(5);
    let mut c = BTreeMap::new();
    c.insert(5, v(&[2, 0, 0, 1]));
    let l = ideal_from_idele(&o, &Idele::new(c, false)).unwrap();
    match is_free_rank_one(&o, &l).unwrap() {
        Freeness::NotFree(NotFreeCertificate::ReducedNormClass { modulus, residues }) => {
            assert_eq!(modulus, 5);
            assert_eq!(residues, vec![2]);
        }
        other => panic!("{other:?}"),
    }
    // diag(4, 1) has square reduced norm and is free
    let mut c = BTreeMap::new();
    c.insert(5, v(&[4, 0, 0, 1]));
    let l = ideal_from_idele(&o, &Idele::new(c, false)).unwrap();
    assert!(is_free_rank_one(&o, &l).unwrap().is_free());
}

#[test]
fn freeness_without_an_idele_needs_a_conductor() {
    let o = zp_classical(5);
    let mut l = ideal_from_idele(&o, &Idele::principal(&[5], &v(&[2, 0, 0, 1]), false)).unwrap();
    l.idele = None;
    assert!(matches!(is_free_rank_one(&o, &l), Err(Error::ConductorNotComputed(_))));
}

#[test]
fn idele_sequence_indices() {
    let o = zp_classical(5);
    let mut c = BTreeMap::new();
    c.insert(3, v(&[3, 0, 0, 1]));
    c.insert(5, v(&[5, 0, 0, 1]));
    let alpha = Idele::new(c, false);
    let beta = Idele::principal(&[5], &v(&[3, 1, 0, 5]), false);
    let r = idele_sequence_check(&o, &alpha, &beta).unwrap();
    assert!(r.holds, "{r:?}");
    // right multiplication by diag(p, 1) scales two coordinates
    assert_eq!(r.index_alpha, q(225));
    assert_eq!(r.index_beta, q(25));
}

#[test]
fn unit_cycles_on_shipped_orders() {
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let orders = [
        zp(5, 1),
        is_dg_order(&dg, &ZLattice::standard(4)).unwrap(),
        {
            let ex = lambda2(&q(2)).unwrap();
            is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap()
        },
        s3(),
    ];
    for o in &orders {
        let r = unit_cycle_identity(o, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.units > 0);
    }
}

fn mat2_block() -> Vec<Q> {
    let mut e = unit_vector(6, 1);
    e[4] = q(1);
    e
}

#[test]
fn mayer_vietoris_on_the_s3_order() {
    let o = s3();
    let r = mv_exactness_check(&o, &mat2_block()).unwrap();
    assert!(!r.split);
    // the quotient is F3 x F3
    assert_eq!(r.quotient_units, 4);
    assert_eq!(r.cycle_units, 4);
    assert_eq!(r.image_order, 4);
    assert_eq!(r.delta_image_order(), 1);
    assert!(r.components_complete);
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.hi_units, Some(4));
    assert!(r.hi_composite_vanishes);
    // the other block gives the same square
    let f: Vec<Q> = v(&[1, 0, 0, 0, 0, 1]);
    assert!(mv_exactness_check(&o, &f).unwrap().holds());
}

#[test]
fn pullback_lattices() {
    let o = s3();
    let e = mat2_block();
    let square = MvSquare::new(&o, &e).unwrap();
    let ring = square.quotient().ring();
    let one = ring.one().to_vec();
    let l = mv_pullback_lattice(&o, &e, &one).unwrap();
    assert_eq!(&l.lattice, o.lattice());
    let units = ring.units().unwrap();
    for u in units.elements() {
        let l = mv_pullback_lattice(&o, &e, u).unwrap();
        assert!(l.dg_stable);
        assert!(is_free_rank_one(&o, &l).unwrap().is_free());
    }
    assert_eq!(mv_pullback_lattice(&o, &e, &ring.zero()).unwrap_err(), Error::NotUnit);
    let e11 = unit_vector(6, 1);
    assert!(matches!(
        mv_pullback_lattice(&o, &e11, &one),
        Err(Error::NotCentralIdempotent)
    ));
}

#[test]
fn split_orders_have_trivial_sequences() {
    let g = GradedAlgebra::ground(QQ);
    let dg = DgAlgebra::trivial(GradedAlgebra::product(&[&g, &g]).unwrap());
    let o = is_dg_order(&dg, &ZLattice::standard(2)).unwrap();
    let r = mv_exactness_check(&o, &v(&[1, 0])).unwrap();
    assert!(r.split && r.holds());
}

#[test]
fn classical_mayer_vietoris() {
    // Z x Z glued modulo 5 with zero differential
    let g = GradedAlgebra::ground(QQ);
    let dg = DgAlgebra::trivial(GradedAlgebra::product(&[&g, &g]).unwrap());
    let l = ZLattice::from_generators(2, &[v(&[1, 1]), v(&[0, 5])]).unwrap();
    let o = is_dg_order(&dg, &l).unwrap();
    let r = mv_exactness_check(&o, &v(&[1, 0])).unwrap();
    // (Z/5)^x modulo the signs: two classes
    assert_eq!(r.cycle_units, 4);
    assert_eq!(r.image_order, 2);
    assert_eq!(r.delta_image_order(), 2);
    assert!(r.holds(), "{r:?}");
    let d = dg_idele_class_group(&o).unwrap();
    assert_eq!(d.upper_bound, FiniteAbelianGroup::from_cyclic_factors(&[2]));
}

#[test]
fn homology_class_map_cases() {
    // acyclic: degenerate target
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let o = is_dg_order(&dg, &ZLattice::standard(4)).unwrap();
    let l = ideal_from_idele(&o, &Idele::trivial(true)).unwrap();
    let r = homology_class_map(&o, &l).unwrap();
    assert_eq!(r.class, HomologyClass::Degenerate);
    assert!(r.torsion_matches);

    // the s3 shape: L = Lambda has trivial class
    let o = s3();
    let l = ideal_from_idele(&o, &Idele::trivial(true)).unwrap();
    let r = homology_class_map(&o, &l).unwrap();
    assert!(r.class.is_trivial());

    // zero differential: the classical class
    let o = zp_classical(5);
    let l = ideal_from_idele(&o, &Idele::trivial(false)).unwrap();
    assert_eq!(homology_class_map(&o, &l).unwrap().class, HomologyClass::Classical);
}

#[test]
fn torsion_of_locally_free_lattices() {
    let dg = mat2_dx(QQ, &q(2)).unwrap();
    let o = is_dg_order(&dg, &ZLattice::standard(4)).unwrap();
    let l = ideal_from_idele(&o, &Idele::principal(&[3], &v(&[3, 0, 0, 3]), true)).unwrap();
    let r = homology_class_map(&o, &l);
    // H(A) = 0 over Q, so only the torsion is compared
    let r = r.unwrap();
    assert!(r.torsion_matches);
    assert!(r.torsion.iter().any(|(_, t)| t == &vec![dgorder::ring::Z::from(2)]));
}

#[test]
fn cl_hi_sequences() {
    let r = cl_hi_sequence(&s3()).unwrap();
    assert_eq!(r.dg_class_group, Some(FiniteAbelianGroup::trivial()));
    assert_eq!(r.homology_class_group, Some(FiniteAbelianGroup::trivial()));
    assert_eq!(r.cl_hi, Some(FiniteAbelianGroup::trivial()));
    assert_eq!(r.exact, Some(true));
    let dg = mat2_dx(QQ, &q(1)).unwrap();
    let r = cl_hi_sequence(&is_dg_order(&dg, &ZLattice::standard(4)).unwrap()).unwrap();
    assert_eq!(r.exact, Some(true));
}

#[test]
fn unit_lifting() {
    let z = dual_numbers(CoefficientRing::Integers).unwrap();
    assert_eq!(unit_lifting_checks(&z.algebra).unwrap().outcome, LiftingOutcome::Identity);
    let f2 = dual_numbers(CoefficientRing::residue(2).unwrap()).unwrap();
    assert_eq!(unit_lifting_checks(&f2.algebra).unwrap().outcome, LiftingOutcome::Degenerate);

    // upper triangular matrices over F5: units of F5 x F5 lift across e12
    let f5 = CoefficientRing::PrimeField(5);
    let m = GradedAlgebra::matrix_algebra(f5, &[0, 0]);
    let (b, _) = m
        .subalgebra(&[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 0, 1])], vec!["a".into(), "n".into(), "c".into()])
        .unwrap();
    let r = unit_lifting_checks(&b).unwrap();
    assert_eq!(r.outcome, LiftingOutcome::Lifted);
    assert_eq!(r.units, 16);
    assert!(r.holds());

    assert_eq!(cycle_unit_lifting(&dual_numbers(f5).unwrap()).unwrap().outcome, LiftingOutcome::Vacuous);
    let g = GradedAlgebra::ground(f5);
    let prod = DgAlgebra::trivial(GradedAlgebra::product(&[&g, &g]).unwrap());
    let r = cycle_unit_lifting(&prod).unwrap();
    assert_eq!(r.units, 16);
    assert!(r.holds());
}
