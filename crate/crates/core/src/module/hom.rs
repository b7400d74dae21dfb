use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dgmodule::DgModule;
use crate::error::{Error, Result};
use crate::graded::{DgAlgebra, Differential, GradedAlgebra};
use crate::linalg::{field, kernel_basis, QMatrix};
use crate::ring::{CoefficientRing, Q, Z};

/// A homogeneous map between dg-modules; column j of `matrix` is the image
/// of the j-th basis vector of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgMap {
    pub degree: i64,
    pub matrix: QMatrix,
}

impl DgMap {
    pub fn apply(&self, ring: &CoefficientRing, v: &[Q]) -> Vec<Q> {
        self.matrix.apply(v).into_iter().map(|x| ring.reduce(x)).collect()
    }

    /// Homogeneous of its degree and f(a m) = (-1)^{|a| k} a f(m).
    pub fn is_linear(&self, source: &DgModule, target: &DgModule) -> bool {
        let ring = source.ring();
        let f = &self.matrix;
        if f.rows() != target.dim() || f.cols() != source.dim() {
            return false;
        }
        for j in 0..source.dim() {
            for l in 0..target.dim() {
                if !f[(l, j)].is_zero() && target.degree(l) != source.degree(j) + self.degree {
                    return false;
                }
            }
        }
        let a = &source.parent().algebra;
        (0..a.dim()).all(|i| {
            let odd = (a.degree(i) * self.degree).rem_euclid(2) == 1;
            let lhs = f.mul_mat(&source.action_matrix(i));
            let rhs = target.action_matrix(i).mul_mat(f);
            lhs.entries()
                .iter()
                .zip(rhs.entries())
                .all(|(x, y)| ring.reduce(x - ring.sign(odd, y)).is_zero())
        })
    }

    /// d_Hom(f) = delta_N f - (-1)^k f delta_M.
    pub fn d_hom(&self, source: &DgModule, target: &DgModule) -> DgMap {
        let ring = source.ring();
        let odd = self.degree.rem_euclid(2) == 1;
        let a = target.differential().mul_mat(&self.matrix);
        let b = self.matrix.mul_mat(source.differential());
        let data: Vec<Q> = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| ring.sub(x, &ring.sign(odd, y)))
            .collect();
        DgMap {
            degree: self.degree + 1,
            matrix: QMatrix::from_vec(a.rows(), a.cols(), data).expect("shape"),
        }
    }

    pub fn is_cycle(&self, source: &DgModule, target: &DgModule) -> bool {
        self.d_hom(source, target).matrix.is_zero()
    }
}

/// Hom(M, N) as a complex over the coefficient ring, with the map that
/// each basis vector stands for.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: DgModule,
    pub maps: Vec<DgMap>,
}

impl HomComplex {
    pub fn indices_of_degree(&self, k: i64) -> Vec<usize> {
        self.complex.indices_of_degree(k)
    }

    /// The map with the given coordinates in the basis of the complex.
    pub fn map_from_coords(&self, coords: &[Q]) -> Option<DgMap> {
        let ring = self.complex.ring();
        let degree = self.complex.homogeneous_degree(coords)?;
        let first = &self.maps.first()?.matrix;
        let mut data = vec![Q::zero(); first.rows() * first.cols()];
        for (c, f) in coords.iter().zip(&self.maps) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in data.iter_mut().zip(f.matrix.entries()) {
                *x = ring.add(x, &ring.mul(c, y));
            }
        }
        Some(DgMap {
            degree,
            matrix: QMatrix::from_vec(first.rows(), first.cols(), data).ok()?,
        })
    }
}

/// Degree-k algebra-linear maps M -> N, as a basis of matrices.
pub fn hom_space(source: &DgModule, target: &DgModule, k: i64) -> Result<Vec<QMatrix>> {
    let ring = source.ring();
    let (ms, mt) = (source.dim(), target.dim());
    let slots: Vec<(usize, usize)> = (0..mt)
        .flat_map(|l| (0..ms).map(move |j| (l, j)))
        .filter(|&(l, j)| target.degree(l) == source.degree(j) + k)
        .collect();
    if slots.is_empty() {
        return Ok(Vec::new());
    }
    let a = &source.parent().algebra;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for i in 0..a.dim() {
        let odd = (a.degree(i) * k).rem_euclid(2) == 1;
        let am = source.action_matrix(i);
        let an = target.action_matrix(i);
        // (F A_M)[l][j] - s (A_N F)[l][j] = 0 as a linear form in the slots
        for l in 0..mt {
            for j in 0..ms {
                let mut row = vec![Q::zero(); slots.len()];
                for (s, &(sl, sj)) in slots.iter().enumerate() {
                    let mut c = Q::zero();
                    if sl == l {
                        c += &am[(sj, j)];
                    }
                    if sj == j {
                        c -= ring.sign(odd, &an[(l, sl)]);
                    }
                    row[s] = c;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = QMatrix::from_rows(&rows, slots.len());
    let kernel = if rows.is_empty() {
        (0..slots.len())
            .map(|s| crate::linalg::unit_vector(slots.len(), s))
            .collect()
    } else {
        kernel_basis(&ring, &system)?
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut f = QMatrix::zeros(mt, ms);
            for (s, &(l, j)) in slots.iter().enumerate() {
                f[(l, j)] = v[s].clone();
            }
            f
        })
        .collect())
}

/// The Hom-complex with d_Hom(f) = delta_N f - (-1)^{|f|} f delta_M.
pub fn hom_complex(source: &DgModule, target: &DgModule) -> Result<HomComplex> {
    if source.parent() != target.parent() {
        return Err(Error::InvalidParameter("modules over different algebras".into()));
    }
    let ring = source.ring();
    let (Some(smin), Some(smax), Some(tmin), Some(tmax)) = (
        source.degrees().iter().min(),
        source.degrees().iter().max(),
        target.degrees().iter().min(),
        target.degrees().iter().max(),
    ) else {
        return Ok(HomComplex {
            complex: DgModule::complex(ring, Vec::new(), QMatrix::zeros(0, 0))?,
            maps: Vec::new(),
        });
    };
    let mut maps = Vec::new();
    for k in tmin - smax..=tmax - smin {
        for f in hom_space(source, target, k)? {
            maps.push(DgMap { degree: k, matrix: f });
        }
    }
    let total = maps.len();
    let lin = ring.linear_field()?;
    let flat = |f: &QMatrix| f.entries().to_vec();
    let mut d = QMatrix::zeros(total, total);
    for (c, f) in maps.iter().enumerate() {
        let df = f.d_hom(source, target);
        if df.matrix.is_zero() {
            continue;
        }
        let idx: Vec<usize> = (0..total).filter(|&t| maps[t].degree == df.degree).collect();
        let basis: Vec<Vec<Q>> = idx.iter().map(|&t| flat(&maps[t].matrix)).collect();
        let coords = field::solve_left(&lin, &QMatrix::from_rows(&basis, flat(&df.matrix).len()), &flat(&df.matrix))
            .ok_or_else(|| Error::InvalidParameter("d_Hom left the space of linear maps".into()))?;
        for (t, x) in idx.iter().zip(coords) {
            d[(*t, c)] = ring.element(&x)?;
        }
    }
    let degrees = maps.iter().map(|f| f.degree).collect();
    let complex = DgModule::complex(ring, degrees, d)?;
    if !complex.verify().holds(crate::report::Axiom::SquareZero) {
        return Err(Error::NotAComplex);
    }
    Ok(HomComplex { complex, maps })
}

/// Degree-0 cycle maps M -> N.
pub fn cycle_maps(source: &DgModule, target: &DgModule) -> Result<Vec<QMatrix>> {
    let h = hom_complex(source, target)?;
    let idx = h.indices_of_degree(0);
    let d = h.complex.differential();
    let ring = source.ring();
    let mut sub = QMatrix::zeros(d.rows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..d.rows() {
            sub[(r, c)] = d[(r, i)].clone();
        }
    }
    let kernel = if idx.is_empty() { Vec::new() } else { kernel_basis(&ring, &sub)? };
    Ok(kernel
        .into_iter()
        .map(|k| {
            let mut coords = vec![Q::zero(); h.maps.len()];
            for (c, &i) in idx.iter().enumerate() {
                coords[i] = k[c].clone();
            }
            h.map_from_coords(&coords).map(|f| f.matrix).unwrap_or_else(|| {
                QMatrix::zeros(target.dim(), source.dim())
            })
        })
        .collect())
}

const ISO_TRIES: usize = 64;

/// Searches for an invertible degree-0 cycle map M -> N among random
/// combinations of a basis of such maps. `None` means no isomorphism was
/// found; over Q a failure of all tries has negligible probability when
/// one exists.
pub fn find_isomorphism(source: &DgModule, target: &DgModule) -> Result<Option<QMatrix>> {
    if source.dim() != target.dim() {
        return Ok(None);
    }
    let mut ds = source.degrees().to_vec();
    let mut dt = target.degrees().to_vec();
    ds.sort_unstable();
    dt.sort_unstable();
    if ds != dt {
        return Ok(None);
    }
    let ring = source.ring();
    let lin = ring.linear_field()?;
    let basis = cycle_maps(source, target)?;
    if source.dim() == 0 {
        return Ok(Some(QMatrix::zeros(0, 0)));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for t in 0..ISO_TRIES {
        let mut f = QMatrix::zeros(target.dim(), source.dim());
        for (s, b) in basis.iter().enumerate() {
            let c: i64 = if t == 0 {
                i64::from(s == 0)
            } else {
                rng.gen_range(-1000..=1000)
            };
            let c = Q::from_integer(Z::from(c));
            let data: Vec<Q> = f
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(x, y)| ring.add(x, &ring.mul(&c, y)))
                .collect();
            f = QMatrix::from_vec(f.rows(), f.cols(), data)?;
        }
        if !field::det(&lin, &f).is_zero() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// End(L) of a complex L of free modules: basis E_ab sending b_a to b_b in
/// degree |b_b| - |b_a|, product E_ab E_bc = E_ac (first E_ab, then E_bc),
/// and d(G) = T G - (-1)^{|G|} G T, where T is the transpose of the
/// differential matrix of L.
pub fn endomorphism_dg_algebra(l: &DgModule) -> Result<DgAlgebra> {
    let ring = l.ring();
    let s = l.dim();
    if !l.verify().holds(crate::report::Axiom::SquareZero) {
        return Err(Error::NotAComplex);
    }
    if !l.verify().holds(crate::report::Axiom::DegreePlusOne) {
        return Err(Error::InvalidParameter("differential of L is not of degree +1".into()));
    }
    let idx = |a: usize, b: usize| a * s + b;
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for a in 0..s {
        for b in 0..s {
            names.push(format!("E{}{}", a + 1, b + 1));
            degrees.push(l.degree(b) - l.degree(a));
        }
    }
    let mut entries = Vec::new();
    for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                entries.push((idx(a, b), idx(b, c), idx(a, c), Q::one()));
            }
        }
    }
    let mut unit = vec![Q::zero(); s * s];
    for a in 0..s {
        unit[idx(a, a)] = Q::one();
    }
    let algebra = GradedAlgebra::with_unit(ring, names, degrees, &entries, unit)?;
    // T[a][b] = coefficient of b_b in delta(b_a)
    let t = l.differential().transpose();
    let mut dm = QMatrix::zeros(s * s, s * s);
    for a in 0..s {
        for b in 0..s {
            let odd = (l.degree(b) - l.degree(a)).rem_euclid(2) == 1;
            let col = idx(a, b);
            // T E_ab = sum_x T[x][a] E_xb
            for x in 0..s {
                let v = &t[(x, a)];
                if !v.is_zero() {
                    dm[(idx(x, b), col)] += v;
                }
            }
            // E_ab T = sum_y T[b][y] E_ay
            for y in 0..s {
                let v = &t[(b, y)];
                if !v.is_zero() {
                    dm[(idx(a, y), col)] -= ring.sign(odd, v);
                }
            }
        }
    }
    DgAlgebra::new(algebra, Differential::new(dm))
}
