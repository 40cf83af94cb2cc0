//! Exact homological computations for extensions of finite-dimensional
//! algebras over prime fields and the rationals.

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod extension;
pub mod field;
pub mod linalg;
pub mod module;
pub mod presentation;
pub mod quiver;
pub mod report;
pub mod suite;
pub mod tensor;
pub mod verify;
