//! Filtered cochain complexes and their spectral sequences.

mod abutment;
mod complex;
mod dec;
mod filtration;
mod les;
mod maps;
mod page;

pub use abutment::{abutment, Abutment, AbutmentDegree};
pub use complex::CochainComplex;
pub(crate) use complex::block_diagonal;
pub use dec::{dec, verify_dec_shift, DecShiftReport};
pub use filtration::Filtration;
pub use les::{pair_sequence, two_step_sequence, LongExactSequence, SequenceTerm};
pub use maps::{map_of_pages, PageMap};
pub use page::{check_page_recursion, page, pages, FilteredPage, Page, SpectralSequence};
