use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{homogeneous_degree, DgAlgebra, GradedAlgebra};
use crate::linalg::{is_zero_vec, unit_vector, QMatrix, Subspace};
use crate::report::{Axiom, VerificationReport};
use crate::ring::{CoefficientRing, Q};

/// A graded left module over a dg-algebra with a module differential.
/// The action is b_i m_j = sum_k a[i][j][k] m_k, and the differential
/// matrix has delta(m_j) in column j.
#[derive(Clone, Debug, PartialEq)]
pub struct DgModule {
    parent: Arc<DgAlgebra>,
    names: Vec<String>,
    degrees: Vec<i64>,
    /// Sparse action constants, indexed by i * m + j.
    action: Vec<Vec<(usize, Q)>>,
    differential: QMatrix,
}

impl DgModule {
    pub fn new(
        parent: Arc<DgAlgebra>,
        degrees: Vec<i64>,
        entries: &[(usize, usize, usize, Q)],
        differential: QMatrix,
    ) -> Result<Self> {
        let m = degrees.len();
        let n = parent.dim();
        let ring = parent.ring();
        if differential.rows() != m || differential.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: differential.rows().max(differential.cols()),
            });
        }
        let mut acc: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
        for (i, j, k, v) in entries {
            if *i >= n {
                return Err(Error::DimensionMismatch { expected: n, found: i + 1 });
            }
            if *j >= m || *k >= m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: (*j).max(*k) + 1,
                });
            }
            let e = acc.entry((*i, *j, *k)).or_insert_with(Q::zero);
            *e = ring.element(&(&*e + v))?;
        }
        let mut action = vec![Vec::new(); n * m];
        for ((i, j, k), v) in acc {
            if !v.is_zero() {
                action[i * m + j].push((k, v));
            }
        }
        let data = differential
            .entries()
            .iter()
            .map(|x| ring.element(x))
            .collect::<Result<Vec<Q>>>()?;
        Ok(DgModule {
            parent,
            names: (0..m).map(|i| format!("m{i}")).collect(),
            degrees,
            action,
            differential: QMatrix::from_vec(m, m, data)?,
        })
    }

    /// A complex of free modules, viewed as a module over the coefficient ring.
    pub fn complex(ring: CoefficientRing, degrees: Vec<i64>, differential: QMatrix) -> Result<Self> {
        let ground = Arc::new(DgAlgebra::trivial(GradedAlgebra::ground(ring)));
        let entries: Vec<_> = (0..degrees.len())
            .map(|j| (0, j, j, Q::from_integer(1.into())))
            .collect();
        Self::new(ground, degrees, &entries, differential)
    }

    /// A as a left module over itself.
    pub fn regular(parent: Arc<DgAlgebra>) -> Self {
        let entries = parent.algebra.entries();
        let degrees = parent.algebra.degrees().to_vec();
        let names = parent.algebra.names().to_vec();
        let d = parent.differential.matrix().clone();
        let mut m = Self::new(parent, degrees, &entries, d).expect("regular module");
        m.names = names;
        m
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn parent(&self) -> &Arc<DgAlgebra> {
        &self.parent
    }

    pub fn ring(&self) -> CoefficientRing {
        self.parent.ring()
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

    pub fn degree(&self, j: usize) -> i64 {
        self.degrees[j]
    }

    pub fn differential(&self) -> &QMatrix {
        &self.differential
    }

    pub fn basis_vector(&self, j: usize) -> Vec<Q> {
        unit_vector(self.dim(), j)
    }

    /// Nonzero action constants (k, a[i][j][k]).
    pub fn action_of(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.action[i * self.dim() + j]
    }

    pub fn action_entries(&self) -> Vec<(usize, usize, usize, Q)> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..self.parent.dim() {
            for j in 0..m {
                for (k, v) in self.action_of(i, j) {
                    out.push((i, j, *k, v.clone()));
                }
            }
        }
        out
    }

    /// a . v for an algebra element a and a module element v.
    pub fn act(&self, a: &[Q], v: &[Q]) -> Vec<Q> {
        let m = self.dim();
        let ring = self.ring();
        let mut out = vec![Q::zero(); m];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ai * vj;
                for (k, x) in &self.action[i * m + j] {
                    out[*k] += &c * x;
                }
            }
        }
        out.into_iter().map(|x| ring.reduce(x)).collect()
    }

    /// Matrix of v -> b_i v; column j holds b_i m_j.
    pub fn action_matrix(&self, i: usize) -> QMatrix {
        let m = self.dim();
        let mut out = QMatrix::zeros(m, m);
        for j in 0..m {
            for (k, v) in self.action_of(i, j) {
                out[(*k, j)] = v.clone();
            }
        }
        out
    }

    pub fn delta(&self, v: &[Q]) -> Vec<Q> {
        let ring = self.ring();
        self.differential
            .apply(v)
            .into_iter()
            .map(|x| ring.reduce(x))
            .collect()
    }

    pub fn homogeneous_degree(&self, v: &[Q]) -> Option<i64> {
        homogeneous_degree(&self.degrees, v)
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.degrees[j] == d).collect()
    }

    pub fn degree_list(&self) -> Vec<i64> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Homogeneous components of v, one per degree, skipping zeros.
    pub fn components(&self, v: &[Q]) -> Vec<Vec<Q>> {
        self.degree_list()
            .into_iter()
            .filter_map(|d| {
                let mut w = vec![Q::zero(); self.dim()];
                for j in self.indices_of_degree(d) {
                    w[j] = v[j].clone();
                }
                (!is_zero_vec(&w)).then_some(w)
            })
            .collect()
    }

    /// (M[k])_n = M_{k+n}; the differential is unchanged.
    pub fn shift(&self, k: i64) -> DgModule {
        let mut m = self.clone();
        m.degrees = self.degrees.iter().map(|d| d - k).collect();
        m
    }

    /// The same module over a parent with the same shape but another ring.
    pub fn with_parent(&self, parent: Arc<DgAlgebra>) -> Result<DgModule> {
        if parent.dim() != self.parent.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.parent.dim(),
                found: parent.dim(),
            });
        }
        let names = self.names.clone();
        Ok(DgModule::new(
            parent,
            self.degrees.clone(),
            &self.action_entries(),
            self.differential.clone(),
        )?
        .with_names(names))
    }

    /// Direct sum; the basis of `other` follows the basis of `self`.
    pub fn direct_sum(&self, other: &DgModule) -> Result<DgModule> {
        if self.parent != other.parent {
            return Err(Error::InvalidParameter("modules over different algebras".into()));
        }
        let m = self.dim();
        let mut entries = self.action_entries();
        entries.extend(
            other
                .action_entries()
                .into_iter()
                .map(|(i, j, k, v)| (i, j + m, k + m, v)),
        );
        let total = m + other.dim();
        let mut d = QMatrix::zeros(total, total);
        for i in 0..m {
            for j in 0..m {
                d[(i, j)] = self.differential[(i, j)].clone();
            }
        }
        for i in 0..other.dim() {
            for j in 0..other.dim() {
                d[(m + i, m + j)] = other.differential[(i, j)].clone();
            }
        }
        let mut degrees = self.degrees.clone();
        degrees.extend(other.degrees.iter().copied());
        DgModule::new(self.parent.clone(), degrees, &entries, d)
    }

    pub fn verify(&self) -> VerificationReport {
        verify_dg_module(self)
    }

    /// Smallest graded dg-submodule containing the homogeneous components
    /// of the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<Q>]) -> Result<Subspace> {
        let lin = self.ring();
        if !lin.is_field() {
            return Err(Error::NotAField(lin.to_string()));
        }
        let n = self.parent.dim();
        let mut space = Subspace::zero(lin, self.dim());
        let mut queue: Vec<Vec<Q>> = vectors.iter().flat_map(|v| self.components(v)).collect();
        while let Some(v) = queue.pop() {
            if space.contains(&v) {
                continue;
            }
            space = space.with(std::slice::from_ref(&v));
            for i in 0..n {
                let w = self.act(&self.parent.algebra.basis_vector(i), &v);
                if !space.contains(&w) {
                    queue.push(w);
                }
            }
            let w = self.delta(&v);
            if !space.contains(&w) {
                queue.push(w);
            }
        }
        Ok(space)
    }

    /// Checks that a subspace is a graded submodule stable under the
    /// differential, naming a violation otherwise.
    pub fn check_submodule(&self, sub: &Subspace) -> Result<()> {
        for (j, v) in sub.basis().iter().enumerate() {
            for c in self.components(v) {
                if !sub.contains(&c) {
                    return Err(Error::NotSubmodule(format!("basis vector {j} is not homogeneous")));
                }
            }
            for i in 0..self.parent.dim() {
                if !sub.contains(&self.act(&self.parent.algebra.basis_vector(i), v)) {
                    return Err(Error::NotSubmodule(format!(
                        "{} times basis vector {j} leaves the subspace",
                        self.parent.algebra.names()[i]
                    )));
                }
            }
            if !sub.contains(&self.delta(v)) {
                return Err(Error::NotSubmodule(format!(
                    "delta of basis vector {j} leaves the subspace"
                )));
            }
        }
        Ok(())
    }

    /// The dg-submodule on a graded, stable subspace, with its inclusion
    /// (column j is the j-th basis vector of the subspace).
    pub fn submodule(&self, sub: &Subspace) -> Result<(DgModule, QMatrix)> {
        self.check_submodule(sub)?;
        let basis = sub.basis();
        let k = basis.len();
        let mut degrees = Vec::with_capacity(k);
        for v in basis {
            degrees.push(self.homogeneous_degree(v).ok_or(Error::ZeroModule)?);
        }
        let mut entries = Vec::new();
        for i in 0..self.parent.dim() {
            for (j, v) in basis.iter().enumerate() {
                let w = self.act(&self.parent.algebra.basis_vector(i), v);
                for (c, x) in sub.coords(&w).expect("checked").into_iter().enumerate() {
                    if !x.is_zero() {
                        entries.push((i, j, c, x));
                    }
                }
            }
        }
        let mut d = QMatrix::zeros(k, k);
        for (j, v) in basis.iter().enumerate() {
            for (c, x) in sub.coords(&self.delta(v)).expect("checked").into_iter().enumerate() {
                d[(c, j)] = x;
            }
        }
        let inclusion = QMatrix::from_rows(basis, self.dim()).transpose();
        Ok((DgModule::new(self.parent.clone(), degrees, &entries, d)?, inclusion))
    }

    /// M / N with the induced differential, and the projection (columns
    /// are the images of the basis of M).
    pub fn quotient(&self, sub: &Subspace) -> Result<(DgModule, QMatrix)> {
        self.check_submodule(sub)?;
        let keep = sub.complement_indices();
        let pos = |v: &[Q]| -> Vec<Q> {
            let r = sub.reduce(v);
            keep.iter().map(|&c| r[c].clone()).collect()
        };
        let k = keep.len();
        let degrees = keep.iter().map(|&c| self.degrees[c]).collect();
        let mut entries = Vec::new();
        for i in 0..self.parent.dim() {
            for (j, &c) in keep.iter().enumerate() {
                let w = self.act(&self.parent.algebra.basis_vector(i), &self.basis_vector(c));
                for (t, x) in pos(&w).into_iter().enumerate() {
                    if !x.is_zero() {
                        entries.push((i, j, t, x));
                    }
                }
            }
        }
        let mut d = QMatrix::zeros(k, k);
        for (j, &c) in keep.iter().enumerate() {
            for (t, x) in pos(&self.delta(&self.basis_vector(c))).into_iter().enumerate() {
                d[(t, j)] = x;
            }
        }
        let mut proj = QMatrix::zeros(k, self.dim());
        for c in 0..self.dim() {
            for (t, x) in pos(&self.basis_vector(c)).into_iter().enumerate() {
                proj[(t, c)] = x;
            }
        }
        let names = keep.iter().map(|&c| self.names[c].clone()).collect();
        Ok((
            DgModule::new(self.parent.clone(), degrees, &entries, d)?.with_names(names),
            proj,
        ))
    }
}

/// Checks module associativity, unit, grading, degree +1, square-zero and
/// the Leibniz rule delta(a m) = d(a) m + (-1)^{|a|} a delta(m).
pub fn verify_dg_module(m: &DgModule) -> VerificationReport {
    let a = &m.parent.algebra;
    let n = a.dim();
    let dim = m.dim();
    let ring = m.ring();
    let mut r = VerificationReport::default();
    let eq = |x: &[Q], y: &[Q]| x.iter().zip(y).all(|(s, t)| ring.reduce(s - t).is_zero());

    let mut assoc = None;
    'assoc: for i in 0..n {
        for j in 0..n {
            let bij = a.mul(&a.basis_vector(i), &a.basis_vector(j));
            for k in 0..dim {
                let mk = m.basis_vector(k);
                let lhs = m.act(&bij, &mk);
                let rhs = m.act(&a.basis_vector(i), &m.act(&a.basis_vector(j), &mk));
                if !eq(&lhs, &rhs) {
                    assoc = Some(vec![i, j, k]);
                    break 'assoc;
                }
            }
        }
    }
    r.record(Axiom::Associativity, assoc);

    let unit = (0..dim)
        .find(|&k| !eq(&m.act(a.unit(), &m.basis_vector(k)), &m.basis_vector(k)))
        .map(|k| vec![k]);
    r.record(Axiom::Unit, unit);

    let grading = m
        .action_entries()
        .into_iter()
        .find(|(i, j, k, _)| m.degree(*k) != a.degree(*i) + m.degree(*j))
        .map(|(i, j, k, _)| vec![i, j, k]);
    r.record(Axiom::Grading, grading);

    let dm = &m.differential;
    let deg = (0..dim)
        .flat_map(|j| (0..dim).map(move |k| (j, k)))
        .find(|&(j, k)| !dm[(k, j)].is_zero() && m.degree(k) != m.degree(j) + 1)
        .map(|(j, k)| vec![j, k]);
    r.record(Axiom::DegreePlusOne, deg);

    let sq = (0..dim)
        .find(|&j| !is_zero_vec(&m.delta(&m.delta(&m.basis_vector(j)))))
        .map(|j| vec![j]);
    r.record(Axiom::SquareZero, sq);

    let mut leibniz = None;
    'leib: for i in 0..n {
        let bi = a.basis_vector(i);
        let dbi = m.parent.d(&bi);
        for j in 0..dim {
            let mj = m.basis_vector(j);
            let lhs = m.delta(&m.act(&bi, &mj));
            let t1 = m.act(&dbi, &mj);
            let t2 = m.act(&bi, &m.delta(&mj));
            let odd = a.degree(i).rem_euclid(2) == 1;
            let rhs: Vec<Q> = t1
                .iter()
                .zip(&t2)
                .map(|(x, y)| ring.add(x, &ring.sign(odd, y)))
                .collect();
            if !eq(&lhs, &rhs) {
                leibniz = Some(vec![i, j]);
                break 'leib;
            }
        }
    }
    r.record(Axiom::Leibniz, leibniz);
    r
}
