use thiserror::Error;

use crate::exact_algebra::FgAbGroup;

/// Errors raised by the algebraic and topological constructions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("denominator is not contained in numerator: {0}")]
    NotASubgroup(String),

    #[error("vector does not lie in the numerator subgroup")]
    NotInSubgroup,

    #[error("map is not compatible with the given subquotients: {0}")]
    NotCompatible(String),

    #[error("differentials do not square to zero in degree {degree}")]
    NotAComplex { degree: i64 },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("map does not preserve filtrations: {0}")]
    NotFiltered(String),

    #[error("couple is not exact at {node} ({p}, {q})")]
    NotExact { node: &'static str, p: i64, q: i64 },

    #[error("malformed cell complex: {0}")]
    MalformedComplex(String),

    #[error("malformed sheaf: {0}")]
    MalformedSheaf(String),

    #[error("invalid cellular map: {0}")]
    InvalidMap(String),

    #[error("cell set is not open (upward closed): {0}")]
    NotOpen(String),

    #[error("cell set is not closed (downward closed): {0}")]
    NotClosed(String),

    #[error("filtration is not cellular: level {level}, degree {degree} carries {group}")]
    NotCellular {
        level: usize,
        degree: i64,
        group: FgAbGroup,
    },

    #[error("closed subcomplex is not a member of the filtration")]
    NotMember,

    #[error("spectral sequence does not converge to the abutment: {0}")]
    Convergence(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
