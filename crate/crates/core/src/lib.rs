//! Exact computations with linear monads on products of projective spaces:
//! polynomial matrices, line-bundle cohomology, intersection numbers,
//! validation of monad conditions and vanishing scans for the kernel bundle.

#![forbid(unsafe_code)]

pub mod cas;
pub mod cohomology;
pub mod constructions;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod monad;
pub mod monad_file;
pub mod polyalgebra;
pub mod stability;

pub use cohomology::{kunneth_h, sum_h, CohomTable, LineBundleSum};
pub use error::{Error, Result};
pub use lattice::{MultiDeg, Polarization, Space};
pub use monad::Monad;
pub use monad_file::MonadFile;
pub use polyalgebra::{FieldSpec, MultiPoly, PolyMatrix};
