//! Exact computations for differential graded algebras, their modules,
//! homology, dg-radicals, dg-orders and class groups.

pub mod catalog;
pub mod classgroup;
pub mod error;
pub mod format;
pub mod graded;
pub mod homology;
pub mod ideals;
pub mod linalg;
pub mod orders;
pub mod module;
pub mod poly;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{CoefficientRing, Q, Z};
