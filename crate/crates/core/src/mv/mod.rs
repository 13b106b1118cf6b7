//! MV-algebras with optional product and scalar structure on finite functional carriers.

pub mod algebra;
pub mod amalgam;
pub mod axioms;
pub(crate) mod closure;
pub mod morphism;
pub mod ops;
pub mod points;
pub mod rational;
pub mod spectrum;
