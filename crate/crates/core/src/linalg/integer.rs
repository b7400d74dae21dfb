//! Hermite and Smith normal forms and integer kernels.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::ZMatrix;
use crate::ring::Z;

fn row_combine(m: &mut ZMatrix, r: usize, i: usize, x: &Z, y: &Z, u: &Z, v: &Z) {
    for j in 0..m.cols() {
        let a = m[(r, j)].clone();
        let b = m[(i, j)].clone();
        m[(r, j)] = x * &a + y * &b;
        m[(i, j)] = u * &a + v * &b;
    }
}

fn col_combine(m: &mut ZMatrix, c: usize, j: usize, x: &Z, y: &Z, u: &Z, v: &Z) {
    for i in 0..m.rows() {
        let a = m[(i, c)].clone();
        let b = m[(i, j)].clone();
        m[(i, c)] = x * &a + y * &b;
        m[(i, j)] = u * &a + v * &b;
    }
}

fn negate_row(m: &mut ZMatrix, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -m[(r, j)].clone();
    }
}

fn negate_col(m: &mut ZMatrix, c: usize) {
    for i in 0..m.rows() {
        m[(i, c)] = -m[(i, c)].clone();
    }
}

/// x, y, g with x a + y b = g = gcd(a, b) >= 0.
fn egcd(a: &Z, b: &Z) -> (Z, Z, Z) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row operations recorded together with their inverses.
struct RowTracker {
    t: ZMatrix,
    t_inv: ZMatrix,
}

impl RowTracker {
    fn new(n: usize) -> Self {
        RowTracker {
            t: ZMatrix::identity(n),
            t_inv: ZMatrix::identity(n),
        }
    }

    /// Determinant-one operation on rows r and i.
    fn combine(&mut self, r: usize, i: usize, x: &Z, y: &Z, u: &Z, v: &Z) {
        row_combine(&mut self.t, r, i, x, y, u, v);
        col_combine(&mut self.t_inv, r, i, v, &-u, &-y, x);
    }

    fn negate(&mut self, r: usize) {
        negate_row(&mut self.t, r);
        negate_col(&mut self.t_inv, r);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.t.swap_rows(a, b);
        self.t_inv.swap_cols(a, b);
    }
}

struct ColTracker {
    t: ZMatrix,
    t_inv: ZMatrix,
}

impl ColTracker {
    fn new(n: usize) -> Self {
        ColTracker {
            t: ZMatrix::identity(n),
            t_inv: ZMatrix::identity(n),
        }
    }

    fn combine(&mut self, c: usize, j: usize, x: &Z, y: &Z, u: &Z, v: &Z) {
        col_combine(&mut self.t, c, j, x, y, u, v);
        row_combine(&mut self.t_inv, c, j, v, &-u, &-y, x);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.t.swap_cols(a, b);
        self.t_inv.swap_rows(a, b);
    }
}

/// Row-style Hermite normal form.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// Echelon form: positive pivots, entries above a pivot in [0, pivot).
    pub h: ZMatrix,
    /// Unimodular with m = u * h.
    pub u: ZMatrix,
    /// Unimodular with t * m = h (the inverse of `u`).
    pub t: ZMatrix,
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`.
    pub fn basis_rows(&self) -> Vec<Vec<Z>> {
        (0..self.rank()).map(|i| self.h.row(i).to_vec()).collect()
    }
}

pub fn hermite_normal_form(m: &ZMatrix) -> Hermite {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut tr = RowTracker::new(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let (g, x, y) = egcd(&a[(r, c)], &a[(i, c)]);
            let u = -(&a[(i, c)] / &g);
            let v = &a[(r, c)] / &g;
            row_combine(&mut a, r, i, &x, &y, &u, &v);
            tr.combine(r, i, &x, &y, &u, &v);
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            negate_row(&mut a, r);
            tr.negate(r);
        }
        for k in 0..r {
            let qk = a[(k, c)].div_floor(&a[(r, c)]);
            if qk.is_zero() {
                continue;
            }
            let one = Z::one();
            let zero = Z::zero();
            // row_k <- row_k - qk row_r, written on the pair (k, r)
            row_combine(&mut a, k, r, &one, &-&qk, &zero, &one);
            tr.combine(k, r, &one, &-&qk, &zero, &one);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite {
        h: a,
        u: tr.t_inv,
        t: tr.t,
        pivots,
    }
}

/// Smith normal form m = u * s * v.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ZMatrix,
    pub s: ZMatrix,
    pub v: ZMatrix,
    /// Row operations: l * m * r = s.
    pub l: ZMatrix,
    pub r: ZMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, a divisibility chain.
    pub fn invariant_factors(&self) -> Vec<Z> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Determinant-one (x, y; u, v) sending (p, b) to (gcd, 0). When p divides b
/// the pivot is kept, so entries cleared elsewhere stay cleared.
fn clearing(p: &Z, b: &Z) -> (Z, Z, Z, Z) {
    if (b % p).is_zero() {
        return (Z::one(), Z::zero(), -(b / p), Z::one());
    }
    let (g, x, y) = egcd(p, b);
    (x, y, -(b / &g), p / &g)
}

pub fn smith_normal_form(m: &ZMatrix) -> Smith {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut lt = RowTracker::new(rows);
    let mut rt = ColTracker::new(cols);
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        lt.swap(t, bi);
        a.swap_cols(t, bj);
        rt.swap(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (x, y, u, v) = clearing(&a[(t, t)], &a[(i, t)]);
                row_combine(&mut a, t, i, &x, &y, &u, &v);
                lt.combine(t, i, &x, &y, &u, &v);
                changed = true;
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (x, y, u, v) = clearing(&a[(t, t)], &a[(t, j)]);
                col_combine(&mut a, t, j, &x, &y, &u, &v);
                rt.combine(t, j, &x, &y, &u, &v);
                changed = true;
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into row t
            let pivot = a[(t, t)].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let one = Z::one();
                    let zero = Z::zero();
                    row_combine(&mut a, t, i, &one, &one, &zero, &one);
                    lt.combine(t, i, &one, &one, &zero, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            lt.negate(t);
        }
    }
    Smith {
        u: lt.t_inv,
        s: a,
        v: rt.t_inv,
        l: lt.t,
        r: rt.t,
    }
}

/// Z-basis of {v in Z^n : m v = 0}, in Hermite form.
pub fn integer_kernel(m: &ZMatrix) -> Vec<Vec<Z>> {
    let h = hermite_normal_form(&m.transpose());
    let rank = h.rank();
    let gens: Vec<Vec<Z>> = (rank..h.t.rows()).map(|i| h.t.row(i).to_vec()).collect();
    if gens.is_empty() {
        return gens;
    }
    let g = ZMatrix::from_rows(&gens, m.cols());
    hermite_normal_form(&g).basis_rows()
}

/// Z-basis of {x in Z^m : x m = 0}.
pub fn integer_left_kernel(m: &ZMatrix) -> Vec<Vec<Z>> {
    integer_kernel(&m.transpose())
}

/// Determinant by fraction-free elimination.
pub fn integer_det(m: &ZMatrix) -> Z {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Z::one();
    }
    let mut a = m.clone();
    let mut sign = Z::one();
    let mut prev = Z::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Z::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = val;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_of_swap_is_identity() {
        let h = hermite_normal_form(&ZMatrix::from_i64(2, 2, &[0, 1, 1, 0]));
        assert_eq!(h.h, ZMatrix::identity(2));
        assert_eq!(h.u.mul_mat(&h.h), ZMatrix::from_i64(2, 2, &[0, 1, 1, 0]));
    }

    #[test]
    fn hermite_fixed_points() {
        for m in [
            ZMatrix::from_i64(2, 2, &[2, 0, 0, 2]),
            ZMatrix::from_i64(2, 2, &[2, 4, 0, 0]),
        ] {
            assert_eq!(hermite_normal_form(&m).h, m);
        }
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&ZMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.s, ZMatrix::from_i64(2, 2, &[1, 0, 0, 6]));
        assert!(smith_normal_form(&ZMatrix::zeros(2, 2)).s.is_zero());
        assert_eq!(smith_normal_form(&ZMatrix::identity(3)).s, ZMatrix::identity(3));
        let m = ZMatrix::from_i64(3, 3, &[-2, 2, 0, 2, -2, 2, 0, 2, -2]);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul_mat(&s.s).mul_mat(&s.v), m);
        assert_eq!(s.invariant_factors(), vec![Z::from(2), Z::from(2), Z::from(2)]);
    }

    #[test]
    fn determinants() {
        assert_eq!(integer_det(&ZMatrix::from_i64(2, 2, &[1, 2, 3, 4])), Z::from(-2));
        assert_eq!(integer_det(&ZMatrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0])), Z::from(1));
        assert_eq!(integer_det(&ZMatrix::from_i64(2, 2, &[2, 4, 1, 2])), Z::from(0));
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&ZMatrix::from_i64(1, 2, &[2, 4]));
        assert_eq!(k, vec![vec![Z::from(2), Z::from(-1)]]);
    }
}
