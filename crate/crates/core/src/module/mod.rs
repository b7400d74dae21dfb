//! Differential graded modules, Hom-complexes, endomorphism dg-algebras
//! and the cone construction.

mod cone;
mod dgmodule;
mod hom;

pub use cone::{cone_tensor, ConeTensor};
pub use dgmodule::{verify_dg_module, DgModule};
pub use hom::{
    cycle_maps, endomorphism_dg_algebra, find_isomorphism, hom_complex, hom_space, DgMap,
    HomComplex,
};
