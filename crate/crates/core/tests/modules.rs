use std::sync::Arc;

use dgorder::catalog::{mat2_dx, mat3_complex};
use dgorder::graded::{find_monomial_isomorphism, is_dg_isomorphism, verify_dg_algebra};
use dgorder::linalg::{QMatrix, Subspace};
use dgorder::module::{
    cone_tensor, cycle_maps, endomorphism_dg_algebra, find_isomorphism, hom_complex, DgMap, DgModule,
};
use dgorder::report::Axiom;
use dgorder::ring::{q, qf, CoefficientRing, Q};

const QQ: CoefficientRing = CoefficientRing::Rationals;

/// K^2 with delta(p, q) = (x q, 0), p in degree n and q in degree n - 1.
fn column_module(ring: CoefficientRing, x: i64, n: i64, delta_x: i64) -> DgModule {
    let parent = Arc::new(mat2_dx(ring, &q(x)).unwrap());
    // e_ij m_j = m_i with e11 = 0, e12 = 1, e21 = 2, e22 = 3
    let entries = [(0, 0, 0, q(1)), (1, 1, 0, q(1)), (2, 0, 1, q(1)), (3, 1, 1, q(1))];
    let mut d = QMatrix::zeros(2, 2);
    d[(0, 1)] = q(delta_x);
    DgModule::new(parent, vec![n, n - 1], &entries, d).unwrap()
}

fn complex(degrees: Vec<i64>, d: &[(usize, usize, i64)]) -> DgModule {
    let n = degrees.len();
    let mut m = QMatrix::zeros(n, n);
    for &(i, j, v) in d {
        m[(j, i)] = q(v);
    }
    DgModule::complex(QQ, degrees, m).unwrap()
}

#[test]
fn regular_and_column_modules_verify() {
    for x in [0, 1, 2] {
        let parent = Arc::new(mat2_dx(QQ, &q(x)).unwrap());
        assert!(DgModule::regular(parent).verify().passed());
        assert!(column_module(QQ, x, 1, x).verify().passed());
        assert!(column_module(QQ, x, -3, x).verify().passed());
    }
}

#[test]
fn column_module_needs_the_differential() {
    let r = column_module(QQ, 1, 1, 0).verify();
    assert!(!r.holds(Axiom::Leibniz));
    assert!(r.holds(Axiom::Associativity));
    assert!(!column_module(QQ, 2, 1, 1).verify().holds(Axiom::Leibniz));
}

#[test]
fn shifts() {
    let m = column_module(QQ, 1, 1, 1);
    assert_eq!(m.shift(0), m);
    assert_eq!(m.shift(2).shift(-2), m);
    assert_eq!(m.shift(1), column_module(QQ, 1, 0, 1));
    assert!(m.shift(5).verify().passed());
}

#[test]
fn quotients() {
    let parent = Arc::new(mat2_dx(QQ, &q(1)).unwrap());
    let reg = DgModule::regular(parent);
    let zero = Subspace::zero(QQ, 4);
    let (same, proj) = reg.quotient(&zero).unwrap();
    assert_eq!(same.action_entries(), reg.action_entries());
    assert_eq!(proj, QMatrix::identity(4));
    let (nothing, _) = reg.quotient(&Subspace::full(QQ, 4)).unwrap();
    assert_eq!(nothing.dim(), 0);
    // second column: e12, e22
    let col = Subspace::span(QQ, 4, &[vec![q(0), q(1), q(0), q(0)], vec![q(0), q(0), q(0), q(1)]]).unwrap();
    let (sub, _) = reg.submodule(&col).unwrap();
    assert!(find_isomorphism(&sub, &column_module(QQ, 1, 1, 1)).unwrap().is_some());
    let (quot, proj) = reg.quotient(&col).unwrap();
    assert!(quot.verify().passed());
    assert!(find_isomorphism(&quot, &column_module(QQ, 1, 0, 1)).unwrap().is_some());
    let p = DgMap { degree: 0, matrix: proj };
    assert!(p.is_linear(&reg, &quot) && p.is_cycle(&reg, &quot));
    // first column is not stable under d
    let bad = Subspace::span(QQ, 4, &[vec![q(1), q(0), q(0), q(0)], vec![q(0), q(0), q(1), q(0)]]).unwrap();
    assert!(reg.quotient(&bad).is_err());
}

#[test]
fn hom_of_stalks() {
    let k = complex(vec![0], &[]);
    let h = hom_complex(&k, &k).unwrap();
    assert_eq!(h.complex.dim(), 1);
    assert!(h.complex.differential().is_zero());
}

#[test]
fn morphisms_between_two_term_complexes() {
    // L1 = M -> M in degrees 0, 1 and L2 = N -> N in degrees -1, 0
    let l1 = complex(vec![0, 0, 1, 1], &[(0, 2, 1), (1, 3, 1)]);
    let l2 = complex(vec![-1, 0], &[(0, 1, 1)]);
    assert_eq!(cycle_maps(&l1, &l2).unwrap().len(), 2);
    assert!(cycle_maps(&l2, &l1).unwrap().is_empty());
}

#[test]
fn hom_complex_is_a_complex_with_expected_cycles() {
    let m = column_module(QQ, 1, 1, 1);
    let parent = m.parent().clone();
    let reg = DgModule::regular(parent);
    for (s, t) in [(&m, &reg), (&reg, &m), (&reg, &reg), (&m, &m)] {
        let h = hom_complex(s, t).unwrap();
        assert!(h.complex.verify().passed());
        for f in &h.maps {
            assert!(f.is_linear(s, t));
        }
        for f in cycle_maps(s, t).unwrap() {
            let g = DgMap { degree: 0, matrix: f };
            let commutes = t.differential().mul_mat(&g.matrix) == g.matrix.mul_mat(s.differential());
            assert!(commutes);
        }
    }
    // shifting the target shifts Hom degrees
    let h = hom_complex(&m, &m).unwrap();
    let h2 = hom_complex(&m, &m.shift(2)).unwrap();
    let mut d1: Vec<i64> = h.complex.degrees().iter().map(|d| d - 2).collect();
    let mut d2 = h2.complex.degrees().to_vec();
    d1.sort();
    d2.sort();
    assert_eq!(d1, d2);
}

#[test]
fn end_of_two_term_complex_is_mat2() {
    for x in [q(1), q(2), qf(1, 2), q(-3)] {
        let mut d = QMatrix::zeros(2, 2);
        d[(1, 0)] = x.clone();
        let l = DgModule::complex(QQ, vec![0, 1], d).unwrap();
        let end = endomorphism_dg_algebra(&l).unwrap();
        assert!(end.verify().passed());
        let mat = mat2_dx(QQ, &x).unwrap();
        assert_eq!(end.algebra.entries(), mat.algebra.entries());
        assert_eq!(end.differential, mat.differential);
        let f = find_monomial_isomorphism(&end, &mat).unwrap();
        assert!(is_dg_isomorphism(&end, &mat, &f));
    }
}

#[test]
fn end_of_stalk_is_ground_ring() {
    let l = complex(vec![0], &[]);
    let end = endomorphism_dg_algebra(&l).unwrap();
    assert_eq!(end.dim(), 1);
    assert!(end.differential.is_zero());
}

#[test]
fn end_of_rank_three_complex_is_mat3() {
    for (a11, a21) in [(1, 1), (0, 1), (2, 3), (2, 2)] {
        // b1, b2 in degree 0, b3 in degree 1, delta(b1) = a11 b3, delta(b2) = a21 b3
        let l = complex(vec![0, 0, 1], &[(0, 2, a11), (1, 2, a21)]);
        let end = endomorphism_dg_algebra(&l).unwrap();
        let mat = mat3_complex(QQ, &q(a11), &q(a21)).unwrap();
        assert!(verify_dg_algebra(&mat.algebra, &mat.differential).unwrap().passed());
        assert_eq!(end.differential, mat.differential);
    }
}

#[test]
fn end_rejects_non_complexes() {
    let l = complex(vec![0, 1, 2], &[(0, 1, 1), (1, 2, 1)]);
    assert!(endomorphism_dg_algebra(&l).is_err());
}

#[test]
fn cone_of_column_module() {
    let s = column_module(QQ, 1, 1, 1);
    let c = cone_tensor(&s).unwrap();
    assert_eq!(c.module.dim(), 4);
    assert!(c.module.verify().passed());
    let reg = DgModule::regular(s.parent().clone());
    assert!(find_isomorphism(&c.module, &reg).unwrap().is_some());
    let inc = DgMap { degree: 0, matrix: c.inclusion.clone() };
    assert!(inc.is_linear(&s, &c.module) && inc.is_cycle(&s, &c.module));
    let s1 = s.shift(1);
    let proj = DgMap { degree: 0, matrix: c.projection.clone() };
    assert!(proj.is_linear(&c.module, &s1) && proj.is_cycle(&c.module, &s1));
    assert!(c.projection.mul_mat(&c.inclusion).is_zero());
}

#[test]
fn cone_of_stalk() {
    let k = complex(vec![0], &[]);
    let c = cone_tensor(&k).unwrap();
    assert!(c.module.verify().passed());
    assert_eq!(c.module.degrees(), &[0, -1]);
    assert_eq!(c.module.delta(&[q(0), q(1)]), vec![q(1), q(0)]);
}

#[test]
fn modules_over_f5() {
    let f5 = CoefficientRing::PrimeField(5);
    let m = column_module(f5, 1, 1, 1);
    assert!(m.verify().passed());
    let sub = m.generated_submodule(&[vec![q(1), Q::from_integer(0.into())]]).unwrap();
    assert_eq!(sub.dim(), 2);
}
