//! Exact spectral sequences over the integers.
//!
//! The crate computes spectral sequences of filtered cochain complexes of
//! free abelian groups, their exact couples, cohomology of cellular sheaves
//! on finite regular cell complexes, higher direct images along cellular
//! maps, and checks that the Leray spectral sequence of a cellular map agrees
//! from the second page on with the spectral sequence of the filtration
//! pulled back from a cellular filtration of the base.
//!
//! Everything is computed with arbitrary-precision integers; groups are
//! reported in invariant-factor form ([`FgAbGroup`]).

pub mod cell_site;
pub mod error;
pub mod exact_algebra;
pub mod exact_couple;
pub mod filtered_complex;
pub mod fixtures;
pub mod leray;

pub use error::{Error, Result};
pub use exact_algebra::{Coefficients, FgAbGroup, IntMatrix, Subgroup, Subquotient};
