//! Exact-arithmetic toolkit for semi-stable sheaves of multiplicity five on
//! the projective plane.
//!
//! A sheaf is presented as the cokernel of a graded matrix of homogeneous
//! polynomials in `x, y, z` between direct sums of line bundles.  The crate
//! classifies such presentations into the strata of the moduli spaces
//! M(5,chi), computes their cohomological invariants, constructs the named
//! families, and audits the dimension bookkeeping of the stratification.
//!
//! All arithmetic is exact: arbitrary-precision rationals or a prime field
//! `F_p` with odd `p < 2^31`.  There is no floating point anywhere.

pub mod error;
pub mod rng;
pub mod scalar;
pub mod linalg;
pub mod forms;
pub mod graded;
pub mod cohomology;
pub mod kronecker;
pub mod strata;
pub mod gallery;
pub mod doc;
pub mod crosscheck;
pub mod report;
pub mod exec;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
