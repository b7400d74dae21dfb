//! Randomized checks of the exact integer linear algebra against small
//! independent oracles.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use dgorder::linalg::{field, integer_det, integer_kernel, smith_normal_form, QMatrix, ZLattice, ZMatrix};
use dgorder::ring::{CoefficientRing, Q, Z};

const QQ: CoefficientRing = CoefficientRing::Rationals;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c))
    })
}

/// Determinant by cofactor expansion.
fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors d_k / d_(k-1) from the gcds d_k of k x k minors.
fn invariant_factors_by_minors(r: usize, c: usize, data: &[i64]) -> Vec<i128> {
    let mut divisors = vec![1i128];
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| data[i * c + j] as i128).collect())
                    .collect();
                g = g.gcd(&cofactor_det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

fn zrows(r: usize, c: usize, data: &[i64]) -> Vec<Vec<Z>> {
    (0..r).map(|i| (0..c).map(|j| Z::from(data[i * c + j])).collect()).collect()
}

fn qrows(rows: &[Vec<Z>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().cloned().map(Q::from_integer).collect()).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn smith_form_matches_minor_gcds((r, c, data) in small_matrix(4, 4)) {
        let m = ZMatrix::from_i64(r, c, &data);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul_mat(&s.s).mul_mat(&s.v), m.clone());
        prop_assert_eq!(s.l.mul_mat(&m).mul_mat(&s.r), s.s.clone());
        prop_assert!(integer_det(&s.u).abs().is_one());
        prop_assert!(integer_det(&s.v).abs().is_one());
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.s[(i, j)].is_zero());
                }
            }
        }
        let got = s.invariant_factors();
        for w in got.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let want: Vec<Z> = invariant_factors_by_minors(r, c, &data).into_iter().map(Z::from).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn determinant_matches_cofactor_expansion((n, data) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(-9i64..=9, n * n)))) {
        let rows: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| data[i * n + j] as i128).collect()).collect();
        prop_assert_eq!(integer_det(&ZMatrix::from_i64(n, n, &data)), Z::from(cofactor_det(&rows)));
    }

    #[test]
    fn integer_kernels_are_saturated(
        (r, c, data) in small_matrix(3, 5),
        mix in prop::collection::vec(-5i64..=5, 5),
    ) {
        let m = ZMatrix::from_i64(r, c, &data);
        let kernel = integer_kernel(&m);
        let qm = m.to_q();
        prop_assert_eq!(kernel.len(), c - field::rank(&QQ, &qm));
        for v in &kernel {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        // a primitive integer vector of the rational kernel lies in the span
        let qk = field::kernel(&QQ, &qm);
        if qk.is_empty() {
            return Ok(());
        }
        let mut w = vec![Q::zero(); c];
        for (b, &t) in qk.iter().zip(&mix) {
            for (x, y) in w.iter_mut().zip(b) {
                *x += y * Q::from_integer(Z::from(t));
            }
        }
        let den = w.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
        let mut zw: Vec<Z> = w.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let g = zw.iter().fold(Z::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Ok(());
        }
        for x in zw.iter_mut() {
            *x = &*x / &g;
        }
        let lattice = ZLattice::from_integer_rows(c, &kernel);
        let zq: Vec<Q> = zw.into_iter().map(Q::from_integer).collect();
        prop_assert!(lattice.contains(&zq));
    }

    #[test]
    fn lattice_sum_and_intersection_indices(
        a in prop::collection::vec(-6i64..=6, 9),
        b in prop::collection::vec(-6i64..=6, 9),
    ) {
        let ra = zrows(3, 3, &a);
        let rb = zrows(3, 3, &b);
        let la = ZLattice::from_integer_rows(3, &ra);
        let lb = ZLattice::from_integer_rows(3, &rb);
        prop_assume!(la.is_full() && lb.is_full());
        let sum = la.sum(&lb);
        let meet = la.intersect(&lb);
        prop_assert!(sum.contains_lattice(&la) && sum.contains_lattice(&lb));
        prop_assert!(la.contains_lattice(&meet) && lb.contains_lattice(&meet));
        prop_assert!(meet.is_full());
        // [A + B : A] = [B : A n B]
        let lhs = la.covolume().unwrap() * lb.covolume().unwrap();
        let rhs = meet.covolume().unwrap() * sum.covolume().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(la.covolume().unwrap(), Q::from_integer(integer_det(&ZMatrix::from_i64(3, 3, &a)).abs()));
    }

    #[test]
    fn membership_agrees_with_rational_coordinates(
        gens in prop::collection::vec(-6i64..=6, 9),
        den in 1i64..=4,
        v in prop::collection::vec(-12i64..=12, 3),
    ) {
        let rows = qrows(&zrows(3, 3, &gens));
        let scaled: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| x / Q::from_integer(Z::from(den))).collect()).collect();
        let l = ZLattice::from_generators(3, &scaled).unwrap();
        prop_assume!(l.is_full());
        let target: Vec<Q> = v.iter().map(|&x| Q::from_integer(Z::from(x))).collect();
        let basis = QMatrix::from_rows(&l.basis(), 3);
        let coords = field::solve_left(&QQ, &basis, &target).unwrap();
        prop_assert_eq!(l.contains(&target), coords.iter().all(|x| x.is_integer()));
        // each generator lies in the lattice, with integral coordinates
        for g in &scaled {
            let c = l.coords(g).unwrap();
            let back: Vec<Q> = (0..3)
                .map(|j| c.iter().zip(l.basis()).map(|(x, b)| Q::from_integer(x.clone()) * &b[j]).sum())
                .collect();
            prop_assert_eq!(&back, g);
        }
    }

    #[test]
    fn index_is_multiplicative(
        a in prop::collection::vec(-4i64..=4, 4),
        b in prop::collection::vec(-4i64..=4, 4),
    ) {
        let ma = ZMatrix::from_i64(2, 2, &a);
        let mb = ZMatrix::from_i64(2, 2, &b);
        prop_assume!(!integer_det(&ma).is_zero() && !integer_det(&mb).is_zero());
        let z = ZLattice::standard(2);
        let la = ZLattice::from_integer_rows(2, &ma.row_vecs());
        // the rows of b a span a sublattice of la of index |det b|
        let lab = ZLattice::from_integer_rows(2, &mb.mul_mat(&ma).row_vecs());
        prop_assert!(la.contains_lattice(&lab));
        let i1 = z.index_of(&la).unwrap();
        let i2 = la.index_of(&lab).unwrap();
        prop_assert_eq!(z.index_of(&lab).unwrap(), &i1 * &i2);
        prop_assert_eq!(i2, Q::from_integer(integer_det(&mb).abs()));
    }
}
