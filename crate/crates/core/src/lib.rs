//! Combinatorics and equivariant cohomology of rational fans.
//!
//! The crate computes, with exact integer arithmetic throughout:
//!
//! * cones and fans with their face posets, stars, order complexes and
//!   barycentric subdivisions ([`cone`], [`fan`]);
//! * graded rings of integral piecewise polynomials on a fan ([`poly`], [`pp`]);
//! * the Atiyah–Bredon complex of a complete fan with exactness and torsion
//!   diagnostics over Z, Q and F_p ([`ab`]);
//! * link homology, cell censuses of the toric identification space and
//!   cubical subdivisions ([`topo`]).
//!
//! All values are immutable once built and may be shared across threads.

pub mod ab;
pub mod cli;
pub mod cone;
pub mod error;
pub mod fan;
pub mod fanfile;
pub mod fixtures;
pub mod linalg;
pub mod poly;
pub mod pp;
pub mod topo;

pub use cone::{Cone, LatticeVector, QuotientMap};
pub use error::{Error, Result};
pub use fan::{ConeId, Fan, OrderComplex};
pub use linalg::{IntMatrix, SnfResult};
