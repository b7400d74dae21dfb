//! Randomized checks of the dg-algebra, order and module machinery.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use proptest::prelude::*;

use dgorder::catalog::{dual_numbers, lambda2, mat2_column, mat2_dx, mat3_complex};
use dgorder::graded::{verify_dg_algebra, DgAlgebra, Differential};
use dgorder::ideals::{annihilator, dg_radicals, spin, DgSubmodule};
use dgorder::linalg::{field, QMatrix, Subspace, ZLattice};
use dgorder::module::DgModule;
use dgorder::orders::{dg_lattice_in_module, is_dg_order, left_order, right_order, DgOrder};
use dgorder::report::Axiom;
use dgorder::ring::{q, CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn qr(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

fn rational_algebras() -> Vec<DgAlgebra> {
    vec![
        mat2_dx(QQ, &q(1)).unwrap(),
        mat2_dx(QQ, &q(3)).unwrap(),
        mat2_dx(QQ, &qr(1, 2)).unwrap(),
        mat3_complex(QQ, &q(1), &q(1)).unwrap(),
        mat3_complex(QQ, &q(2), &q(0)).unwrap(),
        dual_numbers(QQ).unwrap(),
    ]
}

/// The dg axioms checked with dense tensors: degree +1, d^2 = 0 and
/// d(b_i b_j) = d(b_i) b_j + (-1)^|b_i| b_i d(b_j).
struct Oracle {
    degree: bool,
    square_zero: bool,
    leibniz: bool,
}

fn oracle(dg: &DgAlgebra, d: &QMatrix) -> Oracle {
    let a = &dg.algebra;
    let n = a.dim();
    let c = |i: usize, j: usize, k: usize| a.constant(i, j, k);
    let col = |i: usize| -> Vec<Q> { (0..n).map(|k| d[(k, i)].clone()).collect() };
    let degree = (0..n).all(|i| (0..n).all(|k| d[(k, i)].is_zero() || a.degree(k) == a.degree(i) + 1));
    let square_zero = (0..n).all(|i| {
        let di = col(i);
        (0..n).all(|k| (0..n).map(|j| &d[(k, j)] * &di[j]).sum::<Q>().is_zero())
    });
    let leibniz = (0..n).all(|i| {
        (0..n).all(|j| {
            let sign = if a.degree(i).rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
            let (di, dj) = (col(i), col(j));
            (0..n).all(|m| {
                let lhs: Q = (0..n).map(|k| c(i, j, k) * &d[(m, k)]).sum();
                let t1: Q = (0..n).map(|k| &di[k] * c(k, j, m)).sum();
                let t2: Q = (0..n).map(|k| &dj[k] * c(i, k, m)).sum();
                lhs == t1 + &sign * t2
            })
        })
    });
    Oracle {
        degree,
        square_zero,
        leibniz,
    }
}

/// A full graded lattice: a random full lattice in each degree, plus its
/// image under d, which keeps it d-stable since d^2 = 0.
fn graded_dg_lattice(dg: &DgAlgebra, entries: &[i64], dens: &[i64]) -> Option<ZLattice> {
    let a = &dg.algebra;
    let n = a.dim();
    let mut gens = Vec::new();
    let mut used = 0;
    for d in a.degree_list() {
        let idx = a.indices_of_degree(d);
        let k = idx.len();
        let mut block = QMatrix::zeros(k, k);
        for r in 0..k {
            for s in 0..k {
                let t = entries[(used + r * k + s) % entries.len()];
                block[(r, s)] = if r == s { q(t.abs() + 1) } else { q(t) };
            }
        }
        used += k * k;
        if field::det(&QQ, &block).is_zero() {
            return None;
        }
        for r in 0..k {
            let den = dens[(used + r) % dens.len()];
            let mut v = vec![Q::zero(); n];
            for (s, &i) in idx.iter().enumerate() {
                v[i] = &block[(r, s)] / q(den);
            }
            gens.push(v);
        }
    }
    let images: Vec<Vec<Q>> = gens.iter().map(|g| dg.d(g)).collect();
    gens.extend(images);
    ZLattice::from_generators(n, &gens).ok()
}

fn closed_under(l: &ZLattice, f: impl Fn(&[Q]) -> Vec<Q>) -> bool {
    l.basis().iter().all(|b| l.contains(&f(b)))
}

fn field_algebras() -> &'static Vec<(Arc<DgAlgebra>, DgSubmodule)> {
    static CELL: OnceLock<Vec<(Arc<DgAlgebra>, DgSubmodule)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let f5 = CoefficientRing::PrimeField(5);
        let f3 = CoefficientRing::PrimeField(3);
        [
            mat2_dx(f5, &q(1)).unwrap(),
            mat2_dx(f5, &q(0)).unwrap(),
            mat2_dx(f3, &q(2)).unwrap(),
            mat3_complex(f5, &q(1), &q(1)).unwrap(),
            mat3_complex(f3, &q(1), &q(0)).unwrap(),
            dual_numbers(f5).unwrap(),
            DgAlgebra::product(&[&mat2_dx(f5, &q(1)).unwrap(), &dual_numbers(f5).unwrap()]).unwrap(),
        ]
        .into_iter()
        .map(|dg| {
            let two = dg_radicals(&dg).unwrap().two;
            (Arc::new(dg), two)
        })
        .collect()
    })
}

/// A quotient of the regular module by the dg-submodule spun from the
/// given generators.
fn random_module(dg: &Arc<DgAlgebra>, gens: &[Vec<u64>]) -> DgModule {
    let regular = DgModule::regular(Arc::clone(dg));
    let n = dg.dim();
    let vs: Vec<Vec<Q>> = gens
        .iter()
        .map(|g| (0..n).map(|i| dg.ring().reduce(q(g[i % g.len()] as i64))).collect())
        .collect();
    let sub = spin(&regular, &vs).unwrap();
    regular.quotient(sub.space()).unwrap().0
}

/// The module with basis w_j = sum_k P[k][j] m_k, for P preserving degrees.
fn conjugate(m: &DgModule, p: &QMatrix) -> DgModule {
    let dim = m.dim();
    let parent = m.parent();
    let to_new = |v: &[Q]| field::solve(&QQ, p, v).expect("invertible");
    let w: Vec<Vec<Q>> = (0..dim).map(|j| p.col(j)).collect();
    let mut entries = Vec::new();
    for i in 0..parent.dim() {
        let b = parent.algebra.basis_vector(i);
        for (j, wj) in w.iter().enumerate() {
            for (k, c) in to_new(&m.act(&b, wj)).into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, k, c));
                }
            }
        }
    }
    let mut delta = QMatrix::zeros(dim, dim);
    for (j, wj) in w.iter().enumerate() {
        for (k, c) in to_new(&m.delta(wj)).into_iter().enumerate() {
            delta[(k, j)] = c;
        }
    }
    DgModule::new(Arc::clone(parent), m.degrees().to_vec(), &entries, delta).unwrap()
}

fn integral_orders() -> &'static Vec<DgOrder> {
    static CELL: OnceLock<Vec<DgOrder>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for x in 1..=3 {
            let dg = mat2_dx(QQ, &q(x)).unwrap();
            out.push(is_dg_order(&dg, &ZLattice::standard(4)).unwrap());
        }
        for x in [2, 4] {
            let ex = lambda2(&q(x)).unwrap();
            out.push(is_dg_order(&ex.dg, ex.order.as_ref().unwrap()).unwrap());
        }
        out
    })
}

proptest! {
    #![proptest_config(config())]

    fn axiom_checker_catches_injected_violations(
        which in 0usize..6,
        edits in prop::collection::vec((0usize..9, 0usize..9, -3i64..=3), 1..=2),
    ) {
        let dg = &rational_algebras()[which];
        let n = dg.dim();
        let mut d = dg.differential.matrix().clone();
        for (i, j, c) in &edits {
            d[(j % n, i % n)] += q(*c);
        }
        let report = verify_dg_algebra(&dg.algebra, &Differential::new(d.clone())).unwrap();
        let o = oracle(dg, &d);
        prop_assert_eq!(report.holds(Axiom::DegreePlusOne), o.degree);
        prop_assert_eq!(report.holds(Axiom::SquareZero), o.square_zero);
        prop_assert_eq!(report.holds(Axiom::Leibniz), o.leibniz);
        // the unperturbed differential is always accepted
        let base = oracle(dg, dg.differential.matrix());
        prop_assert!(base.degree && base.square_zero && base.leibniz);
        prop_assert!(dg.verify().passed());
    }

    fn conductor_orders_are_dg_orders(
        which in 0usize..5,
        entries in prop::collection::vec(-3i64..=3, 9),
        dens in prop::collection::vec(1i64..=3, 4),
    ) {
        let dg = &rational_algebras()[which];
        let Some(l) = graded_dg_lattice(dg, &entries, &dens) else {
            return Ok(());
        };
        prop_assert!(l.is_full());
        prop_assert!(closed_under(&l, |b| dg.d(b)));
        for (o, left) in [(left_order(dg, &l).unwrap(), true), (right_order(dg, &l).unwrap(), false)] {
            let ol = o.lattice();
            prop_assert!(ol.contains(dg.algebra.unit()));
            prop_assert!(closed_under(ol, |b| dg.d(b)));
            for x in o.basis() {
                prop_assert!(ol.basis().iter().all(|y| ol.contains(&dg.mul(x, y))));
                let stable = l.basis().iter().all(|m| {
                    let p = if left { dg.mul(x, m) } else { dg.mul(m, x) };
                    l.contains(&p)
                });
                prop_assert!(stable);
            }
        }
    }

    fn dg_lattices_in_modules(
        which in 0usize..5,
        shift in -1i64..=1,
        blocks in prop::collection::vec(-3i64..=3, 8),
        dens in prop::collection::vec(1i64..=4, 4),
    ) {
        let order = &integral_orders()[which];
        let x = order.algebra().d(&order.algebra().algebra.basis_vector(2))[0].clone();
        let column = mat2_column(QQ, &x).unwrap();
        let column = column.with_parent(Arc::clone(order.algebra())).unwrap();
        let v = column.direct_sum(&column.shift(shift)).unwrap();
        // a random degree-preserving change of basis
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (j, d) in v.degrees().iter().enumerate() {
            by_degree.entry(*d).or_default().push(j);
        }
        let mut p = QMatrix::zeros(4, 4);
        let mut t = 0;
        for idx in by_degree.values() {
            for &r in idx {
                for &s in idx {
                    let e = blocks[t % blocks.len()];
                    t += 1;
                    p[(r, s)] = if r == s { qr(e.abs() + 1, dens[t % dens.len()]) } else { q(e) };
                }
            }
        }
        prop_assume!(!field::det(&QQ, &p).is_zero());
        let v = conjugate(&v, &p);
        prop_assert!(v.verify().passed());
        let l = dg_lattice_in_module(order, &v).unwrap();
        prop_assert!(l.is_full());
        prop_assert!(closed_under(&l, |m| v.delta(m)));
        for lam in order.basis() {
            prop_assert!(closed_under(&l, |m| v.act(lam, m)));
        }
    }

    fn annihilators_are_twosided_dg_ideals(
        which in 0usize..7,
        gens in prop::collection::vec(prop::collection::vec(0u64..5, 9), 0..=2),
    ) {
        let (dg, _) = &field_algebras()[which];
        let m = random_module(dg, &gens);
        let ann = annihilator(&m).unwrap();
        let a = &dg.algebra;
        let space = Subspace::span(dg.ring(), dg.dim(), ann.basis()).unwrap();
        for r in ann.basis() {
            prop_assert!(space.contains(&dg.d(r)));
            for i in 0..dg.dim() {
                let b = a.basis_vector(i);
                prop_assert!(space.contains(&a.mul(&b, r)));
                prop_assert!(space.contains(&a.mul(r, &b)));
            }
            for j in 0..m.dim() {
                prop_assert!(m.act(r, &m.basis_vector(j)).iter().all(Zero::is_zero));
            }
        }
        // anything acting by zero lies in the annihilator
        for i in 0..dg.dim() {
            let b = a.basis_vector(i);
            let kills = (0..m.dim()).all(|j| m.act(&b, &m.basis_vector(j)).iter().all(Zero::is_zero));
            prop_assert_eq!(kills, space.contains(&b));
        }
    }

    fn nakayama_on_finite_field_modules(
        which in 0usize..7,
        gens in prop::collection::vec(prop::collection::vec(0u64..5, 9), 0..=2),
        sub in prop::collection::vec(prop::collection::vec(0u64..5, 9), 1..=2),
    ) {
        let (dg, two) = &field_algebras()[which];
        let m = random_module(dg, &gens);
        let mut jm = Vec::new();
        for r in two.basis() {
            for j in 0..m.dim() {
                jm.push(m.act(r, &m.basis_vector(j)));
            }
        }
        let jm = Subspace::span(dg.ring(), m.dim(), &jm).unwrap();
        if m.dim() > 0 {
            prop_assert!(!jm.is_full());
        }
        let vs: Vec<Vec<Q>> = sub
            .iter()
            .map(|g| (0..m.dim()).map(|i| dg.ring().reduce(q(g[i % g.len()] as i64))).collect())
            .collect();
        let n = spin(&m, &vs).unwrap();
        if n.space().sum(&jm).is_full() {
            prop_assert!(n.is_full());
        }
    }
}

pub const SUITES: &[(&str, fn())] = &[
    ("axiom_checker_catches_injected_violations", axiom_checker_catches_injected_violations),
    ("conductor_orders_are_dg_orders", conductor_orders_are_dg_orders),
    ("dg_lattices_in_modules", dg_lattices_in_modules),
    ("annihilators_are_twosided_dg_ideals", annihilators_are_twosided_dg_ideals),
    ("nakayama_on_finite_field_modules", nakayama_on_finite_field_modules),
];
