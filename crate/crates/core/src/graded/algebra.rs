use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{field, QMatrix, Subspace};
use crate::ring::{CoefficientRing, Q};

/// Finite-basis associative algebra with a Z-grading on the basis,
/// given by structure constants b_i b_j = sum_k c[i][j][k] b_k.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    ring: CoefficientRing,
    names: Vec<String>,
    degrees: Vec<i64>,
    /// Sparse structure constants, indexed by i * n + j.
    table: Vec<Vec<(usize, Q)>>,
    unit: Vec<Q>,
}

impl GradedAlgebra {
    /// Build from nonzero structure constants (i, j, k, value). The unit is
    /// found by solving the linear system 1 * b_j = b_j.
    pub fn new(
        ring: CoefficientRing,
        names: Vec<String>,
        degrees: Vec<i64>,
        entries: &[(usize, usize, usize, Q)],
    ) -> Result<Self> {
        let mut a = Self::without_unit(ring, names, degrees, entries)?;
        a.unit = a.find_unit()?;
        Ok(a)
    }

    pub fn with_unit(
        ring: CoefficientRing,
        names: Vec<String>,
        degrees: Vec<i64>,
        entries: &[(usize, usize, usize, Q)],
        unit: Vec<Q>,
    ) -> Result<Self> {
        let mut a = Self::without_unit(ring, names, degrees, entries)?;
        if unit.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: unit.len(),
            });
        }
        a.unit = unit
            .iter()
            .map(|x| ring.element(x))
            .collect::<Result<_>>()?;
        Ok(a)
    }

    fn without_unit(
        ring: CoefficientRing,
        names: Vec<String>,
        degrees: Vec<i64>,
        entries: &[(usize, usize, usize, Q)],
    ) -> Result<Self> {
        let n = degrees.len();
        if names.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: names.len(),
            });
        }
        let mut acc: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
        for (i, j, k, v) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: (*i).max(*j).max(*k) + 1,
                });
            }
            let e = acc.entry((*i, *j, *k)).or_insert_with(Q::zero);
            *e = ring.element(&(&*e + v))?;
        }
        let mut table = vec![Vec::new(); n * n];
        for ((i, j, k), v) in acc {
            if !v.is_zero() {
                table[i * n + j].push((k, v));
            }
        }
        Ok(GradedAlgebra {
            ring,
            names,
            degrees,
            table,
            unit: vec![Q::zero(); n],
        })
    }

    fn find_unit(&self) -> Result<Vec<Q>> {
        let n = self.dim();
        let lin = self.ring.linear_field()?;
        // unknown u with u * b_j = b_j and b_j * u = b_j for all j
        let mut m = QMatrix::zeros(2 * n * n, n);
        let mut rhs = vec![Q::zero(); 2 * n * n];
        for j in 0..n {
            for i in 0..n {
                for (k, v) in &self.table[i * n + j] {
                    m[(j * n + k, i)] += v;
                }
                for (k, v) in &self.table[j * n + i] {
                    m[(n * n + j * n + k, i)] += v;
                }
            }
            rhs[j * n + j] = Q::one();
            rhs[n * n + j * n + j] = Q::one();
        }
        let u = field::solve(&lin, &m, &rhs)
            .ok_or_else(|| Error::InvalidParameter("algebra has no unit".into()))?;
        u.iter().map(|x| self.ring.element(x)).collect()
    }

    /// Mat_n with e_ij in degree w_j - w_i.
    pub fn matrix_algebra(ring: CoefficientRing, weights: &[i64]) -> Self {
        let s = weights.len();
        let idx = |i: usize, j: usize| i * s + j;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..s {
            for j in 0..s {
                names.push(format!("e{}{}", i + 1, j + 1));
                degrees.push(weights[j] - weights[i]);
            }
        }
        let mut entries = Vec::new();
        for i in 0..s {
            for j in 0..s {
                for l in 0..s {
                    entries.push((idx(i, j), idx(j, l), idx(i, l), Q::one()));
                }
            }
        }
        let mut unit = vec![Q::zero(); s * s];
        for i in 0..s {
            unit[idx(i, i)] = Q::one();
        }
        Self::with_unit(ring, names, degrees, &entries, unit).expect("matrix algebra")
    }

    /// The coefficient ring itself, as a one-dimensional algebra in degree 0.
    pub fn ground(ring: CoefficientRing) -> Self {
        Self::with_unit(
            ring,
            vec!["1".into()],
            vec![0],
            &[(0, 0, 0, Q::one())],
            vec![Q::one()],
        )
        .expect("ground ring")
    }

    /// Direct product; basis is the concatenation of the factor bases.
    pub fn product(factors: &[&GradedAlgebra]) -> Result<Self> {
        let ring = factors
            .first()
            .map(|a| a.ring)
            .ok_or_else(|| Error::InvalidParameter("empty product".into()))?;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut entries = Vec::new();
        let mut unit = Vec::new();
        let mut off = 0;
        for (f_idx, a) in factors.iter().enumerate() {
            if a.ring != ring {
                return Err(Error::InvalidRing("factors over different rings".into()));
            }
            let n = a.dim();
            for i in 0..n {
                names.push(format!("{}_{}", a.names[i], f_idx + 1));
                degrees.push(a.degrees[i]);
                for j in 0..n {
                    for (k, v) in a.products(i, j) {
                        entries.push((off + i, off + j, off + k, v.clone()));
                    }
                }
            }
            unit.extend(a.unit.iter().cloned());
            off += n;
        }
        Self::with_unit(ring, names, degrees, &entries, unit)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Nonzero structure constants (k, c[i][j][k]).
    pub fn products(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i * self.dim() + j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.products(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Q::zero)
    }

    /// All nonzero structure constants.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Q)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, v) in self.products(i, j) {
                    out.push((i, j, *k, v.clone()));
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        crate::linalg::unit_vector(self.dim(), i)
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, v) in &self.table[i * n + j] {
                    out[*k] += &ab * v;
                }
            }
        }
        self.reduce_vec(out)
    }

    pub fn reduce_vec(&self, v: Vec<Q>) -> Vec<Q> {
        v.into_iter().map(|x| self.ring.reduce(x)).collect()
    }

    pub fn add(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn scale(&self, c: &Q, a: &[Q]) -> Vec<Q> {
        a.iter().map(|x| self.ring.mul(c, x)).collect()
    }

    /// Matrix of x -> a x; column j holds a * b_j.
    pub fn left_mult_matrix(&self, a: &[Q]) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul(a, &self.basis_vector(j));
            for (k, v) in col.into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    /// Matrix of x -> x a; column j holds b_j * a.
    pub fn right_mult_matrix(&self, a: &[Q]) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul(&self.basis_vector(j), a);
            for (k, v) in col.into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Distinct degrees in increasing order.
    pub fn degree_list(&self) -> Vec<i64> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, v: &[Q]) -> Option<i64> {
        homogeneous_degree(&self.degrees, v)
    }

    /// Same algebra with structure constants read in another ring (for
    /// example reduction of an integral algebra modulo p).
    pub fn change_ring(&self, ring: CoefficientRing) -> Result<Self> {
        Self::with_unit(
            ring,
            self.names.clone(),
            self.degrees.clone(),
            &self.entries(),
            self.unit.clone(),
        )
    }

    /// Same algebra with the grading forgotten (everything in degree 0).
    pub fn ungraded(&self) -> Self {
        let mut a = self.clone();
        a.degrees = vec![0; self.dim()];
        a
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    /// The subalgebra spanned by homogeneous vectors closed under products.
    /// Structure constants are the coordinates of products in `basis`; the
    /// second value is the embedding (rows are the basis vectors).
    pub fn subalgebra(&self, basis: &[Vec<Q>], names: Vec<String>) -> Result<(GradedAlgebra, QMatrix)> {
        let m = basis.len();
        let lin = self.ring.linear_field()?;
        let bmat = QMatrix::from_rows(basis, self.dim());
        let mut degrees = Vec::with_capacity(m);
        for v in basis {
            degrees.push(
                self.homogeneous_degree(v)
                    .ok_or_else(|| Error::InvalidParameter("basis vector is not homogeneous".into()))?,
            );
        }
        let coords = |v: &[Q]| -> Result<Vec<Q>> {
            let c = field::solve_left(&lin, &bmat, v)
                .ok_or_else(|| Error::InvalidParameter("span is not closed under products".into()))?;
            c.iter().map(|x| self.ring.element(x)).collect()
        };
        let mut entries = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let p = self.mul(&basis[i], &basis[j]);
                for (k, v) in coords(&p)?.into_iter().enumerate() {
                    if !v.is_zero() {
                        entries.push((i, j, k, v));
                    }
                }
            }
        }
        // a corner eAe has unit e rather than the unit of A
        let sub = match coords(&self.unit) {
            Ok(unit) => GradedAlgebra::with_unit(self.ring, names, degrees, &entries, unit)?,
            Err(_) => GradedAlgebra::new(self.ring, names, degrees, &entries)?,
        };
        Ok((sub, bmat))
    }

    /// Homogeneous basis of the degree-graded subspace spanned by `vectors`.
    pub fn graded_span(&self, vectors: &[Vec<Q>]) -> Result<Subspace> {
        let lin = self.ring.linear_field()?;
        let mut out = Vec::new();
        for d in self.degree_list() {
            let idx = self.indices_of_degree(d);
            let parts: Vec<Vec<Q>> = vectors
                .iter()
                .map(|v| {
                    let mut w = vec![Q::zero(); self.dim()];
                    for &i in &idx {
                        w[i] = v[i].clone();
                    }
                    w
                })
                .collect();
            out.extend(parts);
        }
        Subspace::span(lin, self.dim(), &out)
    }
}

pub fn homogeneous_degree(degrees: &[i64], v: &[Q]) -> Option<i64> {
    let mut deg = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        match deg {
            None => deg = Some(degrees[i]),
            Some(d) if d != degrees[i] => return None,
            _ => {}
        }
    }
    deg
}

/// A degree +1 endomorphism given by the matrix D with d(b_i) = sum_j D[j][i] b_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    matrix: QMatrix,
}

impl Differential {
    pub fn new(matrix: QMatrix) -> Self {
        Differential { matrix }
    }

    pub fn zero(n: usize) -> Self {
        Differential {
            matrix: QMatrix::zeros(n, n),
        }
    }

    /// From (i, j, value) meaning d(b_i) has coefficient `value` at b_j.
    pub fn from_entries(n: usize, entries: &[(usize, usize, Q)]) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for (i, j, v) in entries {
            m[(*j, *i)] += v;
        }
        Differential { matrix: m }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn apply(&self, ring: &CoefficientRing, v: &[Q]) -> Vec<Q> {
        self.matrix
            .apply(v)
            .into_iter()
            .map(|x| ring.reduce(x))
            .collect()
    }

    pub fn image_of(&self, i: usize) -> Vec<Q> {
        self.matrix.col(i)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn entries(&self) -> Vec<(usize, usize, Q)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..self.matrix.rows() {
                let v = &self.matrix[(j, i)];
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

/// A graded algebra together with a differential of matching size.
#[derive(Clone, Debug, PartialEq)]
pub struct DgAlgebra {
    pub algebra: GradedAlgebra,
    pub differential: Differential,
}

impl DgAlgebra {
    pub fn new(algebra: GradedAlgebra, differential: Differential) -> Result<Self> {
        let n = algebra.dim();
        let m = differential.matrix();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows().max(m.cols()),
            });
        }
        let ring = algebra.ring();
        let matrix = m
            .entries()
            .iter()
            .map(|x| ring.element(x))
            .collect::<Result<Vec<Q>>>()?;
        let differential = Differential::new(QMatrix::from_vec(n, n, matrix)?);
        Ok(DgAlgebra {
            algebra,
            differential,
        })
    }

    /// The algebra with the zero differential.
    pub fn trivial(algebra: GradedAlgebra) -> Self {
        let n = algebra.dim();
        DgAlgebra {
            algebra,
            differential: Differential::zero(n),
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.algebra.ring()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn d(&self, v: &[Q]) -> Vec<Q> {
        self.differential.apply(&self.algebra.ring(), v)
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        self.algebra.mul(a, b)
    }

    pub fn change_ring(&self, ring: CoefficientRing) -> Result<Self> {
        DgAlgebra::new(self.algebra.change_ring(ring)?, self.differential.clone())
    }

    pub fn product(factors: &[&DgAlgebra]) -> Result<Self> {
        let algs: Vec<&GradedAlgebra> = factors.iter().map(|f| &f.algebra).collect();
        let algebra = GradedAlgebra::product(&algs)?;
        let n = algebra.dim();
        let mut m = QMatrix::zeros(n, n);
        let mut off = 0;
        for f in factors {
            let fm = f.differential.matrix();
            for i in 0..f.dim() {
                for j in 0..f.dim() {
                    m[(off + i, off + j)] = fm[(i, j)].clone();
                }
            }
            off += f.dim();
        }
        DgAlgebra::new(algebra, Differential::new(m))
    }

    /// Restriction to a subalgebra spanned by `basis`, which must be
    /// stable under the differential.
    pub fn restrict(&self, basis: &[Vec<Q>], names: Vec<String>) -> Result<(DgAlgebra, QMatrix)> {
        let (sub, emb) = self.algebra.subalgebra(basis, names)?;
        let lin = self.ring().linear_field()?;
        let m = basis.len();
        let mut dm = QMatrix::zeros(m, m);
        for (i, b) in basis.iter().enumerate() {
            let img = self.d(b);
            let c = field::solve_left(&lin, &emb, &img)
                .ok_or_else(|| Error::NotSubmodule("span is not stable under d".into()))?;
            for (j, v) in c.into_iter().enumerate() {
                dm[(j, i)] = self.ring().element(&v)?;
            }
        }
        Ok((DgAlgebra::new(sub, Differential::new(dm))?, emb))
    }
}
