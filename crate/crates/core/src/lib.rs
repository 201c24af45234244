//! Exact weighted diagrams of closed left-invariant 2-forms on completely
//! solvable Lie algebras.

pub mod algebra;
pub mod bilagrangian;
pub mod corpus;
pub mod diagram;
pub mod document;
pub mod dot;
pub mod error;
pub mod flags;
pub mod forms;
pub mod lagrangian;
pub mod linalg;
pub mod par;
pub mod primitivity;
pub mod reduction;
pub mod spectral;
pub mod sweep;

pub use algebra::LieAlgebra;
pub use flags::Flag;
pub use forms::TwoForm;
pub use linalg::{Rational, Subspace, Vector};
