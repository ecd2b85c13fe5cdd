//! Exact and numerical machinery for left-invariant complex, Hermitian, lcK,
//! Vaisman and Sasaki structures on low-dimensional Lie algebras.

pub mod algebra;
pub mod biholo;
pub mod catalog;
pub mod error;
pub mod forms;
pub mod hermitian;
pub mod io;
pub mod matrix;
pub mod modification;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod suite;

pub use algebra::{Endomorphism, JacobiReport, LieAlgebra, Subspace, Vector};
pub use error::{Error, Result};
pub use forms::{ce_differential, KForm};
pub use matrix::Matrix;
pub use scalar::{Scalar, Q};
