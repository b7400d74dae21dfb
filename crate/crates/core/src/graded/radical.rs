use num_traits::{ToPrimitive, Zero};

use super::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{field, QMatrix, Subspace};
use crate::ring::{CoefficientRing, Q, Z};

pub const RADICAL_DIM_CAP: usize = 64;

/// Jacobson radical of the underlying ungraded algebra. Over Q it is the
/// kernel of the trace form; over F_p the trace form is refined by traces
/// of p^i-th powers of integer lifts. Z and Z_(p) are read over Q.
pub fn jacobson_radical(a: &GradedAlgebra) -> Result<Subspace> {
    let n = a.dim();
    if n > RADICAL_DIM_CAP {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: RADICAL_DIM_CAP,
        });
    }
    match a.ring() {
        CoefficientRing::PrimeField(p) => radical_mod_p(a, p),
        CoefficientRing::ResidueRing(_) => Err(Error::UnsupportedRing(a.ring().to_string())),
        _ => radical_char_zero(a),
    }
}

pub fn is_semisimple(a: &GradedAlgebra) -> Result<bool> {
    Ok(jacobson_radical(a)?.is_zero())
}

fn radical_char_zero(a: &GradedAlgebra) -> Result<Subspace> {
    let n = a.dim();
    let traces: Vec<Q> = (0..n).map(|k| a.constant_trace(k)).collect();
    let mut form = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut t = Q::zero();
            for (k, v) in a.products(i, j) {
                t += v * &traces[*k];
            }
            form[(i, j)] = t;
        }
    }
    let q = CoefficientRing::Rationals;
    Subspace::span(q, n, &field::left_kernel(&q, &form))
}

impl GradedAlgebra {
    /// Trace of left multiplication by b_k.
    fn constant_trace(&self, k: usize) -> Q {
        (0..self.dim())
            .map(|j| self.constant(k, j, j))
            .fold(Q::zero(), |acc, x| acc + x)
    }
}

fn to_u128(x: &Q) -> u128 {
    x.to_integer().to_u128().expect("reduced residue")
}

fn mat_mul_mod(a: &[Vec<u128>], b: &[Vec<u128>], m: u128) -> Vec<Vec<u128>> {
    let n = a.len();
    let mut out = vec![vec![0u128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % m;
            }
        }
    }
    out
}

/// (Tr(lift(L_z)^{p^i}) mod p^{i+1}) / p^i, read mod p.
fn power_trace(a: &GradedAlgebra, z: &[Q], p: u64, i: u32) -> u128 {
    let n = a.dim();
    let p = p as u128;
    let modulus = p.pow(i + 1);
    let mut m = vec![vec![0u128; n]; n];
    for (l, zl) in z.iter().enumerate() {
        if zl.is_zero() {
            continue;
        }
        let zl = to_u128(zl);
        for j in 0..n {
            for (k, v) in a.products(l, j) {
                m[*k][j] = (m[*k][j] + zl * to_u128(v)) % p;
            }
        }
    }
    // the lift has entries in [0, p); raise it to p^i by repeated p-th powers
    for _ in 0..i {
        let base = m.clone();
        let mut acc = base.clone();
        for _ in 1..p {
            acc = mat_mul_mod(&acc, &base, modulus);
        }
        m = acc;
    }
    let tr = (0..n).fold(0u128, |t, k| (t + m[k][k]) % modulus);
    (tr / p.pow(i)) % p
}

fn radical_mod_p(a: &GradedAlgebra, p: u64) -> Result<Subspace> {
    let n = a.dim();
    let ring = a.ring();
    let mut levels = 0u32;
    while (p as u128).pow(levels + 1) <= n as u128 {
        levels += 1;
    }
    let mut ideal: Vec<Vec<Q>> = (0..n).map(|i| a.basis_vector(i)).collect();
    for i in 0..=levels {
        if ideal.is_empty() {
            break;
        }
        let mut g = QMatrix::zeros(ideal.len(), n);
        for (r, u) in ideal.iter().enumerate() {
            for b in 0..n {
                let z = a.mul(u, &a.basis_vector(b));
                g[(r, b)] = Q::from_integer(Z::from(power_trace(a, &z, p, i)));
            }
        }
        let u = QMatrix::from_rows(&ideal, n);
        ideal = field::left_kernel(&ring, &g)
            .iter()
            .map(|c| a.reduce_vec(u.left_apply(c)))
            .collect();
    }
    Subspace::span(ring, n, &ideal)
}
