//! Cellular maps, higher direct images and the comparison between the
//! Leray spectral sequence and the spectral sequence of a pulled-back
//! cellular filtration.

mod compare;
mod direct_image;
mod map;
mod table;

pub use compare::{compare_leray, leray_e2, pair_leray, LerayReport, PairReport};
pub use direct_image::{higher_direct_image, higher_direct_images, sheaf_difference};
pub use map::{preimage_filtration, CellularMap};
pub use table::BigradedTable;
