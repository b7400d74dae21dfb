use std::fmt;

use num_traits::{One, Signed};

use super::{d_stable_part, is_dg_order, multiplier_lattice, DgOrder, Side};
use crate::error::Result;
use crate::graded::jacobson_radical;
use crate::linalg::ZLattice;
use crate::ring::{prime_factors, CoefficientRing, Q, Z};

/// Bound on enlargement moves; each one divides the covolume by at least
/// two, so this is never reached at desk scale.
const MOVE_CAP: usize = 64;

pub type MoveSide = Side;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullMove {
    pub prime: u64,
    pub side: MoveSide,
    /// [new order : old order].
    pub index: Q,
}

impl fmt::Display for HullMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "p={} {side} order of the p-radical, index {}", self.prime, self.index)
    }
}

#[derive(Clone, Debug)]
pub struct HullReport {
    pub order: DgOrder,
    pub moves: Vec<HullMove>,
    /// Primes of the discriminant where no move could be tried.
    pub skipped_primes: Vec<u64>,
    pub discriminant: Q,
    /// The hull has reduced discriminant one.
    pub classically_maximal: bool,
}

/// Preimage in the order of the Jacobson radical of order / p order.
pub fn p_radical(order: &DgOrder, p: u64) -> Result<ZLattice> {
    let quotient = order.integral_algebra().change_ring(CoefficientRing::prime_field(p)?)?;
    let rad = jacobson_radical(&quotient.algebra.ungraded())?;
    let pz = Q::from_integer(Z::from(p));
    let mut gens: Vec<Vec<Q>> = order
        .basis()
        .iter()
        .map(|b| b.iter().map(|x| x * &pz).collect())
        .collect();
    for r in rad.basis() {
        let c: Vec<Z> = r.iter().map(|x| x.to_integer()).collect();
        gens.push(order.element(&c));
    }
    ZLattice::from_generators(order.algebra().dim(), &gens)
}

fn try_move(order: &DgOrder, p: u64, side: Side) -> Result<Option<(DgOrder, Q)>> {
    let dg = order.algebra();
    let rad = p_radical(order, p)?;
    let enlarged = multiplier_lattice(&dg.algebra, &rad, side)?;
    let stable = d_stable_part(dg, &enlarged)?;
    if stable == *order.lattice() || !stable.contains_lattice(order.lattice()) {
        return Ok(None);
    }
    let index = stable.index_of(order.lattice())?;
    Ok(Some((is_dg_order(dg, &stable)?, index)))
}

/// Enlarges a dg-order by the moves Gamma -> D(O(rad_p Gamma)) for primes p
/// of the discriminant and both sides, where D(X) = {x in X : d(x) in X},
/// until no move enlarges it.
pub fn dg_maximal_hull(order: &DgOrder) -> Result<HullReport> {
    let mut current = order.clone();
    let mut moves = Vec::new();
    let mut skipped = Vec::new();
    for _ in 0..MOVE_CAP {
        let disc = current.discriminant()?;
        let mut primes = prime_factors(disc.numer());
        primes.retain(|&p| {
            if p == 2 {
                skipped.push(2);
            }
            p != 2
        });
        let mut moved = false;
        'primes: for &p in &primes {
            for side in [Side::Left, Side::Right] {
                if let Some((next, index)) = try_move(&current, p, side)? {
                    moves.push(HullMove { prime: p, side, index });
                    current = next;
                    moved = true;
                    break 'primes;
                }
            }
        }
        if !moved {
            break;
        }
    }
    skipped.sort_unstable();
    skipped.dedup();
    let discriminant = current.discriminant()?;
    let classically_maximal = discriminant.abs().is_one();
    Ok(HullReport {
        order: current,
        moves,
        skipped_primes: skipped,
        discriminant,
        classically_maximal,
    })
}
