//! Open quantum random walks on the integer lattice: exact distributions by
//! direct evolution and by the dual Fourier method, trajectory sampling,
//! central limit parameters and a catalog of reference walks.

pub mod catalog;
pub mod distribution;
pub mod dual;
pub mod error;
pub mod lattice;
pub mod limit;
pub mod qop;
pub mod trajectory;

pub use distribution::{compare, Comparison, Distribution};
pub use error::{Error, Result};
pub use qop::{DensityMat, KrausPair, Mat2, Superoperator};
