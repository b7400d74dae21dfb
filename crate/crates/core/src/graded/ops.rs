use num_traits::Zero;

use super::algebra::{DgAlgebra, GradedAlgebra};
use crate::error::Result;
use crate::linalg::{kernel_basis, QMatrix};
use crate::ring::Q;

/// Basis of ker(d) built degree by degree, so each vector is homogeneous.
pub fn cycle_basis(dg: &DgAlgebra) -> Result<Vec<Vec<Q>>> {
    graded_kernel(&dg.algebra, dg.differential.matrix())
}

/// Kernel of a degree-preserving-shift map given by a column matrix, one
/// degree at a time. Over Z and Z_(p) the kernel is saturated.
pub fn graded_kernel(a: &GradedAlgebra, m: &QMatrix) -> Result<Vec<Vec<Q>>> {
    let n = a.dim();
    let ring = a.ring();
    let mut out = Vec::new();
    for d in a.degree_list() {
        let idx = a.indices_of_degree(d);
        let mut sub = QMatrix::zeros(m.rows(), idx.len());
        for (c, &i) in idx.iter().enumerate() {
            for r in 0..m.rows() {
                sub[(r, c)] = m[(r, i)].clone();
            }
        }
        for k in kernel_basis(&ring, &sub)? {
            let mut v = vec![Q::zero(); n];
            for (c, &i) in idx.iter().enumerate() {
                v[i] = k[c].clone();
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// The graded subalgebra ker(d) with its zero differential, and the
/// embedding whose rows are its basis in the coordinates of A.
pub fn cycles_subalgebra(dg: &DgAlgebra) -> Result<(GradedAlgebra, QMatrix)> {
    let basis = cycle_basis(dg)?;
    let names = (0..basis.len()).map(|i| format!("z{i}")).collect();
    dg.algebra.subalgebra(&basis, names)
}

/// x ._op y = (-1)^{|x||y|} y x, with the same differential.
pub fn opposite_dg_algebra(dg: &DgAlgebra) -> DgAlgebra {
    let a = &dg.algebra;
    let entries: Vec<(usize, usize, usize, Q)> = a
        .entries()
        .into_iter()
        .map(|(i, j, k, v)| {
            let odd = (a.degree(i) * a.degree(j)).rem_euclid(2) == 1;
            (j, i, k, a.ring().sign(odd, &v))
        })
        .collect();
    let op = GradedAlgebra::with_unit(
        a.ring(),
        a.names().to_vec(),
        a.degrees().to_vec(),
        &entries,
        a.unit().to_vec(),
    )
    .expect("same shape");
    DgAlgebra {
        algebra: op,
        differential: dg.differential.clone(),
    }
}
