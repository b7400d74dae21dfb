use std::sync::Arc;

use dgorder::catalog::{dual_numbers, mat2_dx, mat3_complex};
use dgorder::graded::{cycles_subalgebra, jacobson_radical, DgAlgebra, GradedAlgebra};
use dgorder::homology::{
    algebra_homology, algebra_semisimplicity, homology, homology_module, homology_ring,
    semisimple_category_test,
};
use dgorder::linalg::QMatrix;
use dgorder::module::{endomorphism_dg_algebra, DgModule};
use dgorder::ring::{q, CoefficientRing, Q, Z};
use num_integer::Integer;
use num_traits::Zero;

const QQ: CoefficientRing = CoefficientRing::Rationals;
const ZZ: CoefficientRing = CoefficientRing::Integers;

fn is_unit_mod(x: &Q, m: i64) -> bool {
    x.is_integer() && x.to_integer().gcd(&Z::from(m)) == Z::from(1) && !(x.to_integer().mod_floor(&Z::from(m))).is_zero()
}

#[test]
fn mat2_over_z_has_torsion_in_degrees_zero_and_one() {
    for x in [2i64, 3, 6] {
        let h = algebra_homology(&mat2_dx(ZZ, &q(x)).unwrap()).unwrap();
        assert_eq!(h.torsion(0), vec![Z::from(x)]);
        assert_eq!(h.torsion(1), vec![Z::from(x)]);
        assert_eq!(h.free_rank(0) + h.free_rank(1) + h.free_rank(-1), 0);
        assert!(h.in_degree(-1).unwrap().is_zero());
        assert_eq!(h.support(), vec![0, 1]);
    }
}

#[test]
fn mat2_homology_ring_is_truncated_polynomials() {
    for x in [2i64, 3, 6] {
        let r = homology_ring(&mat2_dx(ZZ, &q(x)).unwrap()).unwrap();
        assert_eq!(r.dim(), 2);
        let (a, e) = (0, 1);
        assert_eq!(r.classes[a].degree, 0);
        assert_eq!(r.classes[e].degree, 1);
        assert!(is_unit_mod(&r.unit[a], x) && r.unit[e].is_zero());
        assert!(r.product[e][e].iter().all(Zero::is_zero));
        assert!(r.product[a][e][a].is_zero() && is_unit_mod(&r.product[a][e][e], x));
        assert!(r.product[e][a][a].is_zero() && is_unit_mod(&r.product[e][a][e], x));
        assert!(is_unit_mod(&r.product[a][a][a], x) && r.product[a][a][e].is_zero());
    }
}

#[test]
fn acyclic_over_fields() {
    assert!(algebra_homology(&mat2_dx(QQ, &q(1)).unwrap()).unwrap().is_zero());
    assert_eq!(homology_ring(&mat2_dx(QQ, &q(1)).unwrap()).unwrap().dim(), 0);
    let f5 = CoefficientRing::PrimeField(5);
    assert!(algebra_homology(&mat2_dx(f5, &q(1)).unwrap()).unwrap().is_zero());
    // x = 5 vanishes in F_5
    let h = algebra_homology(&mat2_dx(f5, &q(5)).unwrap()).unwrap();
    assert_eq!(h.free_rank(0), 2);
}

#[test]
fn localized_coefficients_keep_the_p_part() {
    let z3 = CoefficientRing::localized(3).unwrap();
    let h = algebra_homology(&mat2_dx(z3, &q(6)).unwrap()).unwrap();
    assert_eq!(h.torsion(0), vec![Z::from(3)]);
    assert_eq!(h.torsion(1), vec![Z::from(3)]);
    let z5 = CoefficientRing::localized(5).unwrap();
    assert!(algebra_homology(&mat2_dx(z5, &q(6)).unwrap()).unwrap().is_zero());
}

#[test]
fn residue_rings_are_rejected() {
    let r = CoefficientRing::residue(4).unwrap();
    let m = DgModule::complex(r, vec![0], QMatrix::zeros(1, 1)).unwrap();
    assert!(homology(&m).is_err());
}

#[test]
fn zero_differential_gives_the_module() {
    let a = GradedAlgebra::matrix_algebra(ZZ, &[0, 1]);
    let h = algebra_homology(&DgAlgebra::trivial(a)).unwrap();
    assert_eq!(h.free_rank(0), 2);
    assert_eq!(h.free_rank(1), 1);
    assert_eq!(h.free_rank(-1), 1);
}

#[test]
fn mat3_homology() {
    let h = algebra_homology(&mat3_complex(QQ, &q(1), &q(1)).unwrap()).unwrap();
    assert_eq!(h.free_rank(0), 1);
    assert!(h.in_degree(1).unwrap().is_zero());
    assert!(h.in_degree(-1).unwrap().is_zero());
    let h = algebra_homology(&mat3_complex(ZZ, &q(2), &q(2)).unwrap()).unwrap();
    assert_eq!(h.torsion(1), vec![Z::from(2), Z::from(2)]);
    assert_eq!(h.free_rank(1), 0);
}

#[test]
fn euler_characteristic() {
    let algs = [
        mat2_dx(QQ, &q(1)).unwrap(),
        mat2_dx(QQ, &q(0)).unwrap(),
        mat3_complex(QQ, &q(1), &q(0)).unwrap(),
        mat3_complex(QQ, &q(0), &q(0)).unwrap(),
        dual_numbers(QQ).unwrap(),
    ];
    for dg in &algs {
        let h = algebra_homology(dg).unwrap();
        let chi_h: i64 = h
            .per_degree
            .iter()
            .map(|d| if d.degree.rem_euclid(2) == 0 { 1 } else { -1 } * d.free_rank() as i64)
            .sum();
        let chi: i64 = dg
            .algebra
            .degrees()
            .iter()
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(chi, chi_h);
    }
}

#[test]
fn homology_modules() {
    let parent = Arc::new(mat2_dx(ZZ, &q(2)).unwrap());
    let reg = homology_module(&DgModule::regular(parent.clone())).unwrap();
    assert_eq!(reg.action, reg.ring.product);
    // column module over (Mat_2(Q), d_1) is acyclic
    let qp = Arc::new(mat2_dx(QQ, &q(1)).unwrap());
    let entries = [(0, 0, 0, q(1)), (1, 1, 0, q(1)), (2, 0, 1, q(1)), (3, 1, 1, q(1))];
    let mut d = QMatrix::zeros(2, 2);
    d[(0, 1)] = q(1);
    let col = DgModule::new(qp, vec![1, 0], &entries, d).unwrap();
    assert!(homology(&col).unwrap().is_zero());
}

#[test]
fn products_do_not_depend_on_representatives() {
    let dg = mat2_dx(ZZ, &q(6)).unwrap();
    let r = homology_ring(&dg).unwrap();
    let pres = &r.presentation;
    for (i, a) in r.classes.iter().enumerate() {
        for (j, b) in r.classes.iter().enumerate() {
            for ba in pres.in_degree(a.degree).unwrap().boundaries() {
                for bb in pres.in_degree(b.degree).unwrap().boundaries() {
                    let x: Vec<Q> = a.representative.iter().zip(&ba).map(|(s, t)| s + t * q(3)).collect();
                    let y: Vec<Q> = b.representative.iter().zip(&bb).map(|(s, t)| s - t).collect();
                    assert_eq!(pres.class_of(&dg.mul(&x, &y)).unwrap(), r.product[i][j]);
                }
            }
        }
    }
}

#[test]
fn semisimple_category_criterion() {
    let dual = semisimple_category_test(&dual_numbers(QQ).unwrap()).unwrap();
    assert!(dual.acyclic && dual.cycles_semisimple && dual.verdict && dual.direct_sum);
    assert_eq!(dual.witness, Some(vec![q(0), q(1)]));

    let mat = semisimple_category_test(&mat2_dx(QQ, &q(1)).unwrap()).unwrap();
    assert!(mat.acyclic && !mat.cycles_semisimple && !mat.verdict);
    assert_eq!(mat.witness, Some(vec![q(0), q(0), q(1), q(0)]));

    let zero = semisimple_category_test(&mat2_dx(QQ, &q(0)).unwrap()).unwrap();
    assert!(!zero.acyclic && !zero.verdict && zero.witness.is_none());
}

#[test]
fn semisimplicity_of_algebras() {
    assert!(algebra_semisimplicity(&GradedAlgebra::matrix_algebra(QQ, &[0, 1])).unwrap());
    let (eps, _) = cycles_subalgebra(&mat2_dx(QQ, &q(1)).unwrap()).unwrap();
    assert!(!algebra_semisimplicity(&eps).unwrap());
    let (c, _) = cycles_subalgebra(&mat3_complex(QQ, &q(0), &q(1)).unwrap()).unwrap();
    assert_eq!(c.dim(), 5);
    assert!(!algebra_semisimplicity(&c).unwrap());
}

#[test]
fn homology_of_split_simple_dg_algebras_is_simple() {
    // End of complexes with homology: the homology ring is a matrix algebra
    for (degrees, d) in [
        (vec![0, 0, 1], vec![(0usize, 2usize, 1i64)]),
        (vec![0, 1, 1, 2], vec![(0, 1, 1)]),
        (vec![0, 0], vec![]),
    ] {
        let n = degrees.len();
        let mut m = QMatrix::zeros(n, n);
        for (i, j, v) in d {
            m[(j, i)] = q(v);
        }
        let l = DgModule::complex(QQ, degrees, m).unwrap();
        let end = endomorphism_dg_algebra(&l).unwrap();
        let h = homology_ring(&end).unwrap().to_algebra().unwrap();
        assert!(jacobson_radical(&h).unwrap().is_zero());
        assert_eq!(dgorder::graded::center_degree_zero(&h).unwrap().len(), 1);
    }
}
