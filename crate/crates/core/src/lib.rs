//! Exact computer algebra for deformation problems governed by differential
//! graded Lie algebras and their L∞ mapping cones.
//!
//! Everything is computed over exact fields (`Q`, `Q(i)`, `F_p`) with sparse
//! matrices and deterministic pivoting, so identical inputs give identical
//! outputs.

pub mod artin;
pub mod dgla;
pub mod error;
pub mod format;
pub mod geom;
pub mod graded;
pub mod linalg;
pub mod linfty;
pub mod mc;
pub mod samples;
pub mod scalar;

pub use dgla::{check_dgla, check_morphism, Dgla, DglaMorphism};
pub use error::{Error, Result};
pub use graded::{ChainMap, CochainComplex, GradedMap, GradedSpace};
pub use linalg::{SparseMatrix, SparseVec};
pub use scalar::{Field, Rat, Scalar};
