use std::collections::BTreeMap;

use super::{cochain_complex, cochains_on, CellComplex, CellSet, CellularSheaf, SheafCochains};
use crate::error::{Error, Result};
use crate::exact_algebra::{hom_between, homology, FgAbGroup};
use crate::filtered_complex::{Filtration, SpectralSequence};

/// An increasing exhaustive chain of closed subcomplexes
/// `∅ = X_{-1} ⊆ X_0 ⊆ ... ⊆ X_m = X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredSpace {
    levels: Vec<CellSet>,
    cell_levels: Vec<usize>,
}

impl FilteredSpace {
    pub fn new(complex: &CellComplex, levels: Vec<CellSet>) -> Result<Self> {
        if levels.is_empty() && !complex.is_empty() {
            return Err(Error::InvalidFiltration("no levels given".into()));
        }
        for (a, set) in levels.iter().enumerate() {
            if let Some(&c) = set.iter().find(|&&c| c >= complex.len()) {
                return Err(Error::InvalidFiltration(format!("level {a} names cell index {c}")));
            }
            complex.closed_subcomplex(set.clone()).map_err(|e| match e {
                Error::NotClosed(m) => Error::NotClosed(format!("level {a}: {m}")),
                other => other,
            })?;
            if a > 0 && !levels[a - 1].is_subset(set) {
                return Err(Error::InvalidFiltration(format!("level {} is not contained in level {a}", a - 1)));
            }
        }
        if let Some(last) = levels.last() {
            if last.len() != complex.len() {
                return Err(Error::InvalidFiltration(format!(
                    "last level misses {}",
                    complex.describe(&complex.complement(last))
                )));
            }
        }
        let cell_levels = (0..complex.len())
            .map(|c| levels.iter().position(|s| s.contains(&c)).expect("exhaustive"))
            .collect();
        Ok(FilteredSpace { levels, cell_levels })
    }

    /// `X_a` = cells of level at most `a`.
    pub fn from_cell_levels(complex: &CellComplex, cell_levels: &[usize]) -> Result<Self> {
        if cell_levels.len() != complex.len() {
            return Err(Error::InvalidFiltration(format!(
                "{} levels for {} cells",
                cell_levels.len(),
                complex.len()
            )));
        }
        let top = cell_levels.iter().copied().max().unwrap_or(0);
        let levels = (0..=top)
            .map(|a| (0..complex.len()).filter(|&c| cell_levels[c] <= a).collect())
            .collect();
        FilteredSpace::new(complex, levels)
    }

    /// `X_a` = cells of dimension at most `a`.
    pub fn dimension_skeleta(complex: &CellComplex) -> Self {
        let levels: Vec<usize> = (0..complex.len()).map(|c| complex.dim(c)).collect();
        FilteredSpace::from_cell_levels(complex, &levels).expect("skeleta are closed")
    }

    /// The number of levels `m + 1`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `X_a`, empty for negative `a` and everything beyond the top.
    pub fn level(&self, a: i64) -> CellSet {
        if a < 0 {
            CellSet::new()
        } else {
            self.levels
                .get(a as usize)
                .or(self.levels.last())
                .cloned()
                .unwrap_or_default()
        }
    }

    pub fn levels(&self) -> &[CellSet] {
        &self.levels
    }

    /// The stratum `X_a° = X_a \ X_{a-1}`.
    pub fn stratum(&self, a: usize) -> CellSet {
        self.levels[a]
            .difference(&self.level(a as i64 - 1))
            .copied()
            .collect()
    }

    /// The first `a` with the cell in `X_a`.
    pub fn cell_level(&self, cell: usize) -> usize {
        self.cell_levels[cell]
    }

    pub fn cell_levels(&self) -> &[usize] {
        &self.cell_levels
    }

    /// The index `a` with `X_a = cells`, counting the empty set as `X_{-1}`.
    pub fn position_of(&self, cells: &CellSet) -> Option<i64> {
        if cells.is_empty() {
            return Some(-1);
        }
        self.levels.iter().position(|l| l == cells).map(|a| a as i64)
    }
}

/// Global cochains of `sheaf` with the filtration `F^a` = cochains supported
/// on cells outside `X_{a-1}`.
pub fn skeleta_filtration(
    complex: &CellComplex,
    space: &FilteredSpace,
    sheaf: &CellularSheaf,
) -> Result<(SheafCochains, Filtration)> {
    let cochains = cochain_complex(complex, sheaf)?;
    let filtration = cochains.support_filtration(|c| space.cell_level(c) as i64)?;
    Ok((cochains, filtration))
}

/// Where a filtration fails to be cellular: `H^degree` of the sheaf
/// extended by zero from the stratum `level` is `group ≠ 0` with
/// `degree ≠ level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularityWitness {
    pub level: usize,
    pub degree: i64,
    pub group: FgAbGroup,
}

impl From<CellularityWitness> for Error {
    fn from(w: CellularityWitness) -> Self {
        Error::NotCellular {
            level: w.level,
            degree: w.degree,
            group: w.group,
        }
    }
}

/// `None` when `H^i(Y, G_a)` vanishes for `i ≠ a` at every level `a`,
/// otherwise the first offending group.
pub fn cellularity_check(
    complex: &CellComplex,
    space: &FilteredSpace,
    sheaf: &CellularSheaf,
) -> Result<Option<CellularityWitness>> {
    for a in 0..space.len() {
        let c = cochains_on(complex, sheaf, &space.stratum(a))?;
        for (degree, group) in c.cohomology_table() {
            if degree != a as i64 && !group.is_zero() {
                return Ok(Some(CellularityWitness { level: a, degree, group }));
            }
        }
    }
    Ok(None)
}

/// Cohomology of the row `(E_1^{•,0}, d_1)` of the skeletal spectral
/// sequence, checked against cellular cohomology computed directly.
pub fn cellular_cohomology_via_e1(
    complex: &CellComplex,
    space: &FilteredSpace,
    sheaf: &CellularSheaf,
) -> Result<BTreeMap<i64, FgAbGroup>> {
    if let Some(w) = cellularity_check(complex, space, sheaf)? {
        return Err(w.into());
    }
    let (cochains, filtration) = skeleta_filtration(complex, space, sheaf)?;
    let mut ss = SpectralSequence::new(cochains.complex(), &filtration)?;
    let e1 = ss.page(1)?.into_page();
    let mut out = BTreeMap::new();
    for a in 0..space.len() as i64 {
        let outgoing = e1.differential(a, 0)?;
        let incoming = e1.differential(a - 1, 0)?;
        out.insert(a, homology(&incoming, &outgoing)?.group().clone());
    }
    for n in 0..=complex.max_dim() as i64 {
        let direct = cochains.cohomology(n);
        let row = out.get(&n).cloned().unwrap_or_default();
        if direct != row {
            return Err(Error::Convergence(format!(
                "row cohomology {row} differs from H^{n} = {direct}"
            )));
        }
    }
    Ok(out)
}

/// Checks that `d_1: E_1^{a,b} → E_1^{a+1,b}` of the skeletal spectral
/// sequence is the connecting map of
/// `0 → C(X_{a+1}°) → C(X_a° ∪ X_{a+1}°) → C(X_a°) → 0`, comparing kernel,
/// image and cokernel. Returns the first discrepancy.
pub fn check_d1_composite(
    complex: &CellComplex,
    space: &FilteredSpace,
    sheaf: &CellularSheaf,
) -> Result<Option<String>> {
    let (cochains, filtration) = skeleta_filtration(complex, space, sheaf)?;
    let mut ss = SpectralSequence::new(cochains.complex(), &filtration)?;
    let e1 = ss.page(1)?.into_page();
    for a in 0..space.len().saturating_sub(1) {
        let lower = cochains_on(complex, sheaf, &space.stratum(a))?;
        let upper = cochains_on(complex, sheaf, &space.stratum(a + 1))?;
        let both: CellSet = space.stratum(a).union(&space.stratum(a + 1)).copied().collect();
        let both = cochains_on(complex, sheaf, &both)?;
        for n in lower.complex().degrees() {
            let include = both.projection_to(&lower, n).transpose();
            let restrict = both.projection_to(&upper, n + 1);
            let connecting = &(&restrict * &both.complex().differential(n)) * &include;
            let map = hom_between(
                &connecting,
                &lower.complex().cohomology(n),
                &upper.complex().cohomology(n + 1),
            )?;
            let d1 = e1.differential(a as i64, n - a as i64)?;
            let (x, y) = (map.invariants(), d1.invariants());
            let (kx, ky) = (map.kernel().group().clone(), d1.kernel().group().clone());
            if x != y || kx != ky {
                return Ok(Some(format!(
                    "d_1 at ({a},{}) has image {} but the connecting map has image {}",
                    n - a as i64,
                    y.0,
                    x.0
                )));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skeleta_of_the_circle() {
        let x = CellComplex::circle(2).unwrap();
        let y = FilteredSpace::dimension_skeleta(&x);
        let f = CellularSheaf::constant(&x);
        assert_eq!(cellularity_check(&x, &y, &f).unwrap(), None);
        let h = cellular_cohomology_via_e1(&x, &y, &f).unwrap();
        assert_eq!(h[&0], FgAbGroup::free(1));
        assert_eq!(h[&1], FgAbGroup::free(1));
        assert_eq!(check_d1_composite(&x, &y, &f).unwrap(), None);
    }

    #[test]
    fn levels_must_be_closed() {
        let x = CellComplex::interval();
        let r = FilteredSpace::from_cell_levels(&x, &[0, 1, 0]);
        assert!(matches!(r, Err(Error::NotClosed(_))));
    }
}
