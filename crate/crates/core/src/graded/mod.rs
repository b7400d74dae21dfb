//! Graded algebras with a differential: verification, cycles, opposite
//! algebras, central idempotents, blocks and the Jacobson radical.

mod algebra;
mod idempotents;
mod iso;
mod ops;
mod radical;
mod verify;

pub use algebra::{homogeneous_degree, DgAlgebra, Differential, GradedAlgebra};
pub use idempotents::{
    block_decompose, center_degree_zero, central_homogeneous_idempotents, central_idempotents,
    CentralIdempotents,
};
pub use iso::{find_monomial_isomorphism, is_dg_isomorphism};
pub use ops::{cycle_basis, graded_kernel, cycles_subalgebra, opposite_dg_algebra};
pub use radical::{is_semisimple, jacobson_radical, RADICAL_DIM_CAP};
pub use verify::{verify_dg_algebra, verify_graded_algebra};
