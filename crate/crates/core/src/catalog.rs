//! Constructors for the worked examples used as regression fixtures.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{DgAlgebra, Differential, GradedAlgebra};
use crate::linalg::{QMatrix, ZLattice};
use crate::module::DgModule;
use crate::ring::{q, CoefficientRing, Q};

/// A built example: the rational (or modular) dg-algebra and, for order
/// examples, the order as a lattice in it.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub dg: DgAlgebra,
    pub order: Option<ZLattice>,
}

pub const EXAMPLE_NAMES: [&str; 7] = [
    "mat2_dx",
    "mat3_complex",
    "dual_numbers",
    "lambda2",
    "zp_order",
    "s3_order",
    "green_order",
];

/// Index of e_ij (1-based) in a matrix algebra of size s.
fn e(s: usize, i: usize, j: usize) -> usize {
    (i - 1) * s + (j - 1)
}

/// Mat_2 with e12 in degree 1, e21 in degree -1 and
/// d(e21) = x I, d(e11) = -x e12, d(e22) = x e12, d(e12) = 0.
pub fn mat2_dx(ring: CoefficientRing, x: &Q) -> Result<DgAlgebra> {
    let x = ring.element(x)?;
    let a = GradedAlgebra::matrix_algebra(ring, &[0, 1]);
    let d = Differential::from_entries(
        4,
        &[
            (e(2, 2, 1), e(2, 1, 1), x.clone()),
            (e(2, 2, 1), e(2, 2, 2), x.clone()),
            (e(2, 1, 1), e(2, 1, 2), ring.neg(&x)),
            (e(2, 2, 2), e(2, 1, 2), x),
        ],
    );
    DgAlgebra::new(a, d)
}

/// Mat_3 graded by weights (0, 0, 1), with the differential coming from
/// the complex R -> R^2 given by (a11, a21):
/// d(E_ij) = [i = 3](a11 E_1j + a21 E_2j) - (-1)^{|E_ij|}([j = 1] a11 + [j = 2] a21) E_i3.
pub fn mat3_complex(ring: CoefficientRing, a11: &Q, a21: &Q) -> Result<DgAlgebra> {
    let a11 = ring.element(a11)?;
    let a21 = ring.element(a21)?;
    let w = [0i64, 0, 1];
    let a = GradedAlgebra::matrix_algebra(ring, &w);
    let mut entries = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            let src = e(3, i, j);
            if i == 3 {
                entries.push((src, e(3, 1, j), a11.clone()));
                entries.push((src, e(3, 2, j), a21.clone()));
            }
            let odd = (w[j - 1] - w[i - 1]).rem_euclid(2) == 1;
            let c = match j {
                1 => Some(&a11),
                2 => Some(&a21),
                _ => None,
            };
            if let Some(c) = c {
                entries.push((src, e(3, i, 3), ring.neg(&ring.sign(odd, c))));
            }
        }
    }
    DgAlgebra::new(a, Differential::from_entries(9, &entries))
}

/// K[X]/X^2 with X in degree -1 and d(X) = 1.
pub fn dual_numbers(ring: CoefficientRing) -> Result<DgAlgebra> {
    let a = GradedAlgebra::with_unit(
        ring,
        vec!["1".into(), "X".into()],
        vec![0, -1],
        &[(0, 0, 0, Q::one()), (0, 1, 1, Q::one()), (1, 0, 1, Q::one())],
        vec![Q::one(), Q::zero()],
    )?;
    DgAlgebra::new(a, Differential::from_entries(2, &[(1, 0, Q::one())]))
}

/// The first column of (Mat_2, d_x): m1 = e11 in degree 0, m2 = e21 in
/// degree -1, with delta(m2) = x m1.
pub fn mat2_column(ring: CoefficientRing, x: &Q) -> Result<DgModule> {
    let parent = Arc::new(mat2_dx(ring, x)?);
    let x = ring.element(x)?;
    // e_ij m_j = m_i
    let entries = [
        (e(2, 1, 1), 0, 0, Q::one()),
        (e(2, 1, 2), 1, 0, Q::one()),
        (e(2, 2, 1), 0, 1, Q::one()),
        (e(2, 2, 2), 1, 1, Q::one()),
    ];
    let mut d = QMatrix::zeros(2, 2);
    d[(0, 1)] = x;
    Ok(DgModule::new(parent, vec![0, -1], &entries, d)?.with_names(vec!["m1".into(), "m2".into()]))
}

fn lattice(rows: Vec<Vec<Q>>) -> ZLattice {
    let n = rows[0].len();
    ZLattice::from_generators(n, &rows).expect("shape")
}

fn mat_vec(entries: &[(usize, usize, Q)], s: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); s * s];
    for (i, j, c) in entries {
        v[e(s, *i, *j)] = c.clone();
    }
    v
}

/// [[Z, 2Z], [Z/2, Z]] inside (Mat_2(Q), d_x).
pub fn lambda2(x: &Q) -> Result<Example> {
    let dg = mat2_dx(CoefficientRing::Rationals, x)?;
    let order = lattice(vec![
        mat_vec(&[(1, 1, q(1))], 2),
        mat_vec(&[(1, 2, q(2))], 2),
        mat_vec(&[(2, 1, crate::ring::qf(1, 2))], 2),
        mat_vec(&[(2, 2, q(1))], 2),
    ]);
    Ok(Example {
        name: "lambda2".into(),
        dg,
        order: Some(order),
    })
}

/// Z + p Mat_2(Z) inside (Mat_2(Q), d_x).
pub fn zp_order(p: u64, x: &Q) -> Result<Example> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("p = {p}")));
    }
    let dg = mat2_dx(CoefficientRing::Rationals, x)?;
    let pq = Q::from_integer(p.into());
    let order = lattice(vec![
        mat_vec(&[(1, 1, q(1)), (2, 2, q(1))], 2),
        mat_vec(&[(1, 1, pq.clone())], 2),
        mat_vec(&[(1, 2, pq.clone())], 2),
        mat_vec(&[(2, 1, pq)], 2),
    ]);
    Ok(Example {
        name: "zp_order".into(),
        dg,
        order: Some(order),
    })
}

/// Q x Mat_2(Q)^k x Q with d_x on every matrix factor, and the order of
/// tuples (t, M_1, ..., M_k, u) with integral entries such that modulo p
/// every M_i is upper triangular, (M_1)_11 = t, (M_{i+1})_11 = (M_i)_22
/// and u = (M_k)_22.
pub fn green_order(k: usize, p: u64, x: &Q) -> Result<Example> {
    if k == 0 || p < 2 {
        return Err(Error::InvalidParameter(format!("k = {k}, p = {p}")));
    }
    let r = CoefficientRing::Rationals;
    let ground = DgAlgebra::trivial(GradedAlgebra::ground(r));
    let m = mat2_dx(r, x)?;
    let mut factors: Vec<&DgAlgebra> = vec![&ground];
    for _ in 0..k {
        factors.push(&m);
    }
    factors.push(&ground);
    let dg = DgAlgebra::product(&factors)?;
    let n = 4 * k + 2;
    let pq = Q::from_integer(p.into());
    let unit = |i: usize| crate::linalg::unit_vector(n, i);
    // coordinates: 0 = t, 1 + 4(i-1) + e(2, r, c) for M_i, n - 1 = u
    let mi = |i: usize, rr: usize, c: usize| 1 + 4 * (i - 1) + e(2, rr, c);
    let mut rows = Vec::new();
    // diagonal chain t - (M_1)_11, (M_1)_22 - (M_2)_11, ..., (M_k)_22 - u
    let mut chain = vec![0];
    for i in 1..=k {
        chain.push(mi(i, 1, 1));
        chain.push(mi(i, 2, 2));
    }
    chain.push(n - 1);
    for pair in chain.chunks(2) {
        let mut v = unit(pair[0]);
        v[pair[1]] = q(1);
        rows.push(v);
        rows.push(crate::linalg::vec_scale(&pq, &unit(pair[1])));
    }
    for i in 1..=k {
        rows.push(unit(mi(i, 1, 2)));
        rows.push(crate::linalg::vec_scale(&pq, &unit(mi(i, 2, 1))));
    }
    let mut ex = Example {
        name: "green_order".into(),
        dg,
        order: Some(lattice(rows)),
    };
    if k == 1 && p == 3 {
        ex.name = "s3_order".into();
    }
    Ok(ex)
}

/// The shape of the integral group ring of S_3: Q x Mat_2(Q) x Q glued
/// modulo 3.
pub fn s3_order(x: &Q) -> Result<Example> {
    green_order(1, 3, x)
}

/// Parameters for `build`, keyed by name (x, p, k, a11, a21, ring).
pub type Params = BTreeMap<String, String>;

fn param_q(params: &Params, key: &str, default: i64) -> Result<Q> {
    match params.get(key) {
        None => Ok(q(default)),
        Some(s) => s
            .parse::<Q>()
            .map_err(|_| Error::InvalidParameter(format!("{key} = {s}"))),
    }
}

fn param_u64(params: &Params, key: &str, default: u64) -> Result<u64> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s
            .parse::<u64>()
            .map_err(|_| Error::InvalidParameter(format!("{key} = {s}"))),
    }
}

/// Parses Q, Z, Z_loc(p), F(p) or Z/m.
pub fn parse_ring(s: &str) -> Result<CoefficientRing> {
    let s = s.trim();
    let inner = |prefix: &str| -> Option<&str> { s.strip_prefix(prefix)?.strip_suffix(')') };
    let num = |t: &str| -> Result<u64> {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::InvalidRing(s.to_string()))
    };
    match s {
        "Q" => Ok(CoefficientRing::Rationals),
        "Z" => Ok(CoefficientRing::Integers),
        _ => {
            if let Some(t) = inner("Z_loc(") {
                CoefficientRing::localized(num(t)?)
            } else if let Some(t) = inner("F(") {
                CoefficientRing::prime_field(num(t)?)
            } else if let Some(t) = s.strip_prefix("Z/") {
                CoefficientRing::residue(num(t)?)
            } else if let Some(t) = s.strip_prefix('F').filter(|t| t.bytes().all(|b| b.is_ascii_digit())) {
                CoefficientRing::prime_field(num(t)?)
            } else {
                Err(Error::InvalidRing(s.to_string()))
            }
        }
    }
}

/// Builds a catalog example by name.
pub fn build(name: &str, params: &Params) -> Result<Example> {
    let ring = match params.get("ring") {
        Some(r) => parse_ring(r)?,
        None => CoefficientRing::Rationals,
    };
    let plain = |dg: DgAlgebra| Example {
        name: name.to_string(),
        dg,
        order: None,
    };
    match name {
        "mat2_dx" => Ok(plain(mat2_dx(ring, &param_q(params, "x", 1)?)?)),
        "mat3_complex" => Ok(plain(mat3_complex(
            ring,
            &param_q(params, "a11", 1)?,
            &param_q(params, "a21", 1)?,
        )?)),
        "dual_numbers" => Ok(plain(dual_numbers(ring)?)),
        "lambda2" => lambda2(&param_q(params, "x", 2)?),
        "zp_order" => zp_order(param_u64(params, "p", 5)?, &param_q(params, "x", 1)?),
        "s3_order" => s3_order(&param_q(params, "x", 1)?),
        "green_order" => {
            let k = param_u64(params, "k", 1)? as usize;
            green_order(k, param_u64(params, "p", 3)?, &param_q(params, "x", 1)?)
        }
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}
