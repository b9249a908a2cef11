//! Finite regular cell complexes, cellular sheaves and their cohomology,
//! extension by zero, and filtrations by closed subcomplexes.

mod cochains;
mod complex;
mod filtered_space;
mod sheaf;

pub use cochains::{cochain_complex, cochains_on, cohomology, poset_cochains, BasisKey, SheafCochains};
pub(crate) use cochains::nonnegative;
pub use complex::{CellComplex, CellSet, CellSpec, ClosedSubcomplex};
pub use filtered_space::{
    cellular_cohomology_via_e1, cellularity_check, check_d1_composite, skeleta_filtration, CellularityWitness,
    FilteredSpace,
};
pub use sheaf::{CellularSheaf, Stalk};
