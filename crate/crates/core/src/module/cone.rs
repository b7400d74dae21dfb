use num_traits::One;

use super::dgmodule::DgModule;
use crate::error::Result;
use crate::linalg::QMatrix;

/// S tensored with the cone of the identity, C = K c_a + K c_b with
/// |c_a| = -1, |c_b| = 0 and c_a -> c_b. The basis lists S (x) c_b first,
/// then S (x) c_a; the differential is
/// delta(s (x) c) = delta(s) (x) c + (-1)^{|s|} s (x) delta(c).
#[derive(Clone, Debug)]
pub struct ConeTensor {
    pub module: DgModule,
    /// S -> cone, s -> s (x) c_b.
    pub inclusion: QMatrix,
    /// cone -> S[1], s (x) c_a -> s.
    pub projection: QMatrix,
}

pub fn cone_tensor(s: &DgModule) -> Result<ConeTensor> {
    let m = s.dim();
    let ring = s.ring();
    let mut entries = s.action_entries();
    entries.extend(
        s.action_entries()
            .into_iter()
            .map(|(i, j, k, v)| (i, j + m, k + m, v)),
    );
    let mut degrees = s.degrees().to_vec();
    degrees.extend(s.degrees().iter().map(|d| d - 1));
    let sd = s.differential();
    let mut d = QMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            d[(i, j)] = sd[(i, j)].clone();
            d[(m + i, m + j)] = sd[(i, j)].clone();
        }
        let odd = s.degree(i).rem_euclid(2) == 1;
        d[(i, m + i)] = ring.sign(odd, &crate::ring::Q::one());
    }
    let module = DgModule::new(s.parent().clone(), degrees, &entries, d)?;
    let mut inclusion = QMatrix::zeros(2 * m, m);
    let mut projection = QMatrix::zeros(m, 2 * m);
    for i in 0..m {
        inclusion[(i, i)] = crate::ring::Q::one();
        projection[(i, m + i)] = crate::ring::Q::one();
    }
    Ok(ConeTensor {
        module,
        inclusion,
        projection,
    })
}
