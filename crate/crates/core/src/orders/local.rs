use crate::error::{Error, Result};
use crate::linalg::ZLattice;
use crate::ring::{prime_factors, q, valuation, Q};

/// A Z_(p)-lattice, stored as the unique Z-lattice with that localization
/// at p which agrees with Z^n at every other prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalLattice {
    pub prime: u64,
    pub lattice: ZLattice,
}

fn pow(p: u64, k: i64) -> Q {
    let base = q(p as i64);
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// The lattice equal to `x` at p and to `g` at every other prime:
/// (x + p^k g) cap p^-k g with p^k bounding the gap between x and g at p.
fn glue(g: &ZLattice, x: &ZLattice, p: u64) -> Result<ZLattice> {
    let index = x.sum(g).index_of(&x.intersect(g))?;
    let k = valuation(&index, p);
    if k == 0 {
        return Ok(g.clone());
    }
    let lower = x.sum(&g.scale(&pow(p, k)));
    Ok(lower.intersect(&g.scale(&pow(p, -k))))
}

pub fn localize(l: &ZLattice, p: u64) -> Result<LocalLattice> {
    if !l.is_full() {
        return Err(Error::NotFull);
    }
    let standard = ZLattice::standard(l.ambient());
    Ok(LocalLattice {
        prime: p,
        lattice: glue(&standard, l, p)?,
    })
}

/// Primes at which a full lattice differs from Z^n.
pub fn modified_primes(l: &ZLattice) -> Vec<u64> {
    let standard = ZLattice::standard(l.ambient());
    let index = l.sum(&standard).index_of(&l.intersect(&standard)).expect("full");
    let mut ps = prime_factors(index.numer());
    ps.extend(prime_factors(index.denom()));
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// The lattice agreeing with each local datum at its prime and with
/// `default` everywhere else.
pub fn globalize(data: &[LocalLattice], default: &ZLattice) -> Result<ZLattice> {
    let mut g = default.clone();
    for (i, d) in data.iter().enumerate() {
        if !d.lattice.is_full() || d.lattice.ambient() != default.ambient() {
            return Err(Error::InconsistentLocalData(d.prime));
        }
        if data[..i].iter().any(|e| e.prime == d.prime && e.lattice != d.lattice) {
            return Err(Error::InconsistentLocalData(d.prime));
        }
        g = glue(&g, &d.lattice, d.prime)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_helper() {
        assert_eq!(pow(3, 2), q(9));
        assert_eq!(pow(2, -1), crate::ring::qf(1, 2));
        assert_eq!(pow(5, 0), q(1));
    }
}
