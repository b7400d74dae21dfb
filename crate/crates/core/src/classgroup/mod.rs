//! Class groups of orders and dg-orders at desk scale.

pub mod conductor;
pub mod finite;
pub mod idele;
pub mod lifting;
pub mod mv;

pub use conductor::{
    class_group_conductor_square, classical_maximal_order, conductor, cycle_order_basis, dg_idele_class_group,
    reduced_norms, split_commutative_class_group, visible_units, SplitPicard, ClassGroupReport, ConductorSquare,
    CycleOrderKind, DgClassGroupReport, ReducedNormClassGroup, EICHLER_CAVEAT, FINITENESS_CAVEAT,
    GLOBAL_UNITS_CAVEAT, UPPER_BOUND_CAVEAT,
};
pub use finite::{
    AbelianQuotient, FiniteAbelianGroup, FiniteRing, FiniteUnitGroup, LatticeQuotient, Subgroup, ENUMERATION_CAP,
};
pub use idele::{
    degree_zero_cycles, ideal_from_idele, idele_sequence_check, is_free_rank_one, unit_cycle_identity,
    FractionalDgIdeal, Freeness, Idele, IdeleSequenceReport, NotFreeCertificate, UnitCycleReport,
};
pub use mv::{
    cl_hi_sequence, homology_class_map, lattice_torsion, mv_exactness_check, mv_pullback_lattice, ClHiReport,
    HomologyClass, HomologyClassMap, HomologyClassReport, MvReport, MvSquare,
};
pub use lifting::{cycle_unit_lifting, unit_lifting_checks, LiftingOutcome, LiftingReport};
