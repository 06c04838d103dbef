//! Exact computations with finite-dimensional Poisson algebras given by
//! structure constants.

pub mod catalog;
pub mod compat;
pub mod field;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod poisson;
pub mod theorems;

pub use field::{Cardinality, FieldElem, FieldError, FieldSpec};
pub use linalg::{Matrix, Subspace};
pub use poisson::{AlgebraError, AxiomReport, PoissonAlgebra, ProductKind};
