//! Exact multiplier Hopf algebras, their pairings and quantum doubles.

pub mod error;
pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod double;
pub mod linalg;
pub mod mha;
pub mod pairing;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tensor::{Functional, Key, Label, LinMap, Tensor, Vector};
