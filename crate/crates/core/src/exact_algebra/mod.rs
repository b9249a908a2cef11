//! Exact integer linear algebra: Smith and Hermite normal forms, subgroups of
//! free modules, subquotients with explicit coordinates, and homomorphisms
//! between finitely generated abelian groups.

mod group;
mod hermite;
mod hom;
mod matrix;
mod smith;
mod subgroup;
mod subquotient;

pub use group::{cokernel, Coefficients, FgAbGroup};
pub use hermite::HermiteBasis;
pub use hom::{hom_between, homology, is_exact_at, GroupHom};
pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, solve, SmithDecomposition};
pub use subgroup::Subgroup;
pub use subquotient::{induced_map, subquotient, Subquotient};
