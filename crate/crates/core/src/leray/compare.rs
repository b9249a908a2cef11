use std::collections::{BTreeMap, HashMap};

use super::direct_image::{local_cohomology, sheaf_in_degree, LocalCohomology};
use super::{preimage_filtration, sheaf_difference, BigradedTable, CellularMap};
use crate::cell_site::{
    cellularity_check, cochain_complex, cochains_on, cohomology, nonnegative, poset_cochains, CellSet, CellularSheaf,
    FilteredSpace, SheafCochains,
};
use crate::error::{Error, Result};
use crate::exact_algebra::{hom_between, FgAbGroup, IntMatrix};
use crate::filtered_complex::{abutment, Abutment, Filtration, Page, SpectralSequence};

fn direct_images(map: &CellularMap, sheaf: &CellularSheaf) -> Result<(LocalCohomology, Vec<CellularSheaf>)> {
    let local = local_cohomology(map, sheaf)?;
    let sheaves = (0..=local.top)
        .map(|q| sheaf_in_degree(map.target(), &local, q))
        .collect::<Result<Vec<_>>>()?;
    Ok((local, sheaves))
}

fn table_of(map: &CellularMap, sheaves: &[CellularSheaf]) -> Result<BigradedTable> {
    let mut groups = BTreeMap::new();
    for (q, r) in sheaves.iter().enumerate() {
        for (p, g) in cohomology(map.target(), r)? {
            groups.insert((p, q as i64), g);
        }
    }
    Ok(BigradedTable::new(groups))
}

/// `E_2^{p,q} = H^p(Y, R^q f_* F)`.
pub fn leray_e2(map: &CellularMap, sheaf: &CellularSheaf) -> Result<BigradedTable> {
    let (_, sheaves) = direct_images(map, sheaf)?;
    table_of(map, &sheaves)
}

/// The outcome of comparing the Leray spectral sequence of `f` with the
/// spectral sequence of the filtration `X_• = f⁻¹ Y_•` on cochains of `X`.
#[derive(Clone, Debug)]
pub struct LerayReport {
    /// `H^p(Y, R^q f_* F)`.
    pub leray_e2: BigradedTable,
    /// Pages `E_2, E_3, ...` of `(X_•, F)` up to the stabilization page.
    pub pages: Vec<Page>,
    pub abutment: Abutment,
    /// `H^n(X, F)` computed independently on the order complex of `X`.
    pub cohomology: BTreeMap<i64, FgAbGroup>,
    /// The first page from which all differentials vanish.
    pub degenerates_at: usize,
    pub e2_mismatch: Option<String>,
    pub abutment_mismatch: Option<String>,
    /// `None` when the sheaf has torsion stalks and the check is skipped.
    pub edge_map_mismatch: Option<Option<String>>,
    pub functoriality_mismatch: Option<String>,
}

impl LerayReport {
    /// `E_2` of the filtration side.
    pub fn e2(&self) -> BigradedTable {
        BigradedTable::from_page(&self.pages[0])
    }

    pub fn e_infinity(&self) -> BigradedTable {
        BigradedTable::from_page(self.pages.last().expect("at least one page"))
    }

    pub fn edge_map_checked(&self) -> bool {
        self.edge_map_mismatch.is_some()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |what: &str, m: &Option<String>| {
            if let Some(m) = m {
                out.push(format!("{what}: {m}"));
            }
        };
        push("E_2", &self.e2_mismatch);
        push("abutment", &self.abutment_mismatch);
        push("edge map", self.edge_map_mismatch.as_ref().unwrap_or(&None));
        push("functoriality", &self.functoriality_mismatch);
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn check_cellular(map: &CellularMap, space: &FilteredSpace, sheaves: &[CellularSheaf]) -> Result<()> {
    for r in sheaves {
        if let Some(w) = cellularity_check(map.target(), space, r)? {
            return Err(w.into());
        }
    }
    Ok(())
}

fn same_levels(complex_degrees: std::ops::RangeInclusive<i64>, a: &Filtration, b: &Filtration) -> Option<String> {
    let lo = a.p_min().min(b.p_min());
    let hi = a.p_max().max(b.p_max()) + 1;
    for n in complex_degrees {
        for p in lo..=hi {
            let (x, y) = (a.level(p, n), b.level(p, n));
            if !x.is_subgroup_of(&y) || !y.is_subgroup_of(&x) {
                return Some(format!("F^{p} in degree {n} differs"));
            }
        }
    }
    None
}

/// Pulls back order-complex cochains of `Y` with coefficients in `f_* F` to
/// order-complex cochains of `X` with coefficients in `F`: a chain
/// `τ_0 < ... < τ_k` goes to `f τ_0 < ... < f τ_k` when that is still a
/// strict chain and to zero otherwise, and a section over `f⁻¹(↑ f τ_k)`
/// is evaluated at `τ_k`.
fn pullback(
    map: &CellularMap,
    local: &LocalCohomology,
    base: &SheafCochains,
    total: &SheafCochains,
    k: i64,
) -> IntMatrix {
    let columns: HashMap<(&[usize], usize), usize> = base
        .keys(k)
        .iter()
        .enumerate()
        .map(|(i, key)| ((key.chain.as_slice(), key.index), i))
        .collect();
    let rows = total.keys(k);
    let mut m = IntMatrix::zeros(rows.len(), columns.len());
    for (row, key) in rows.iter().enumerate() {
        let image: Vec<usize> = key.chain.iter().map(|&c| map.image(c)).collect();
        if image.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let (tau, sigma) = (*key.chain.last().expect("nonempty"), *image.last().expect("nonempty"));
        let sections = &local.groups[sigma][0];
        let at = local.cochains[sigma]
            .keys(0)
            .iter()
            .position(|b| b.chain == [tau] && b.index == key.index)
            .expect("τ lies over the star of f(τ)");
        for j in 0..sections.group().num_generators() {
            if let Some(&col) = columns.get(&(image.as_slice(), j)) {
                m[(row, col)] = sections.section(j)[at].clone();
            }
        }
    }
    m
}

fn edge_map_check(
    map: &CellularMap,
    sheaf: &CellularSheaf,
    local: &LocalCohomology,
    direct_image: &CellularSheaf,
    e_inf: &Page,
) -> Result<Option<String>> {
    let base = poset_cochains(map.target(), direct_image, &map.target().all_cells())?;
    let total = poset_cochains(map.source(), sheaf, &map.source().all_cells())?;
    let top = map.target().max_dim() as i64;
    let matrices: Vec<IntMatrix> = (0..=top + 1).map(|k| pullback(map, local, &base, &total, k)).collect();
    for k in 0..=top {
        let lhs = &total.complex().differential(k) * &matrices[k as usize];
        let rhs = &matrices[k as usize + 1] * &base.complex().differential(k);
        if lhs != rhs {
            return Ok(Some(format!("pullback is not a cochain map in degree {k}")));
        }
    }
    for p in 0..=top {
        let source = base.complex().cohomology(p);
        let target = total.complex().cohomology(p);
        let image = hom_between(&matrices[p as usize], &source, &target)?.image().group().clone();
        let expected = e_inf.group(p, 0);
        if image != expected {
            return Ok(Some(format!("image of H^{p}(Y, f_*F) is {image} but E_∞^{{{p},0}} = {expected}")));
        }
    }
    Ok(None)
}

/// Checks that the spectral sequence of `X_• = f⁻¹ Y_•` reproduces the
/// Leray table `H^p(Y, R^q f_* F)` at `E_2` and converges to `H^•(X, F)`,
/// and records all later pages.
///
/// Fails with [`Error::NotCellular`] when `Y_•` is not cellular for some
/// `R^q f_* F`.
pub fn compare_leray(map: &CellularMap, sheaf: &CellularSheaf, space: &FilteredSpace) -> Result<LerayReport> {
    let (local, sheaves) = direct_images(map, sheaf)?;
    check_cellular(map, space, &sheaves)?;
    let leray_e2 = table_of(map, &sheaves)?;

    let x_space = preimage_filtration(map, space)?;
    let cochains = cochain_complex(map.source(), sheaf)?;
    let filtration = cochains.support_filtration(|c| x_space.cell_level(c) as i64)?;
    let pushed = cochains.support_filtration(|c| space.cell_level(map.image(c)) as i64)?;
    let functoriality_mismatch = same_levels(cochains.complex().degrees(), &filtration, &pushed);

    let mut ss = SpectralSequence::new(cochains.complex(), &filtration)?;
    let last = ss.stabilization_page().max(2);
    let pages = (2..=last)
        .map(|r| ss.page(r).map(|p| p.into_page()))
        .collect::<Result<Vec<_>>>()?;
    let e2_mismatch = BigradedTable::from_page(&pages[0])
        .first_difference(&leray_e2)
        .map(|((p, q), a, b)| format!("({p},{q}): filtration side {a}, Leray side {b}"));
    let mut degenerates_at = last;
    for (i, page) in pages.iter().enumerate().rev() {
        if !page.differentials_vanish()? {
            break;
        }
        degenerates_at = i + 2;
    }

    let abutment = abutment(cochains.complex(), &filtration)?;
    let direct = poset_cochains(map.source(), sheaf, &map.source().all_cells())?;
    let cohomology = nonnegative(direct.cohomology_table());
    let abutment_mismatch = (0..=map.source().max_dim() as i64)
        .map(|n| (n, abutment.cohomology(n), cohomology.get(&n).cloned().unwrap_or_default()))
        .find(|(_, a, b)| a != b)
        .map(|(n, a, b)| format!("H^{n}: abutment {a}, direct {b}"));

    let edge_map_mismatch = if sheaf.is_free() {
        Some(edge_map_check(
            map,
            sheaf,
            &local,
            &sheaves[0],
            pages.last().expect("pages"),
        )?)
    } else {
        None
    };

    Ok(LerayReport {
        leray_e2,
        pages,
        abutment,
        cohomology,
        degenerates_at,
        e2_mismatch,
        abutment_mismatch,
        edge_map_mismatch,
        functoriality_mismatch,
    })
}

/// The outcome of the relative comparison for `(X, X̃) → (Y, Ỹ)` with
/// `X̃ = f⁻¹ Ỹ`.
#[derive(Clone, Debug)]
pub struct PairReport {
    /// The comparison run for `J_! F`, with `J: X \ X̃ → X`.
    pub leray: LerayReport,
    /// `H^p(Y, j_! R^q f_* F)`, with `j: Y \ Ỹ → Y`.
    pub pushed_e2: BigradedTable,
    /// `H^n(X, X̃; F)` from cochains supported off `X̃`.
    pub relative_cohomology: BTreeMap<i64, FgAbGroup>,
    pub exchange_mismatch: Option<String>,
    pub e2_mismatch: Option<String>,
    pub relative_mismatch: Option<String>,
}

impl PairReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = self.leray.failures();
        for (what, m) in [
            ("j_!/J_! exchange", &self.exchange_mismatch),
            ("relative E_2", &self.e2_mismatch),
            ("relative cohomology", &self.relative_mismatch),
        ] {
            if let Some(m) = m {
                out.push(format!("{what}: {m}"));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// The Leray comparison for the pair `(X, f⁻¹ Ỹ) → (Y, Ỹ)`, where `Ỹ` must
/// be one of the members of `Y_•` (the empty set counts as `Y_{-1}`).
pub fn pair_leray(
    map: &CellularMap,
    sheaf: &CellularSheaf,
    sub: &CellSet,
    space: &FilteredSpace,
) -> Result<PairReport> {
    let (x, y) = (map.source(), map.target());
    y.closed_subcomplex(sub.clone())?;
    if space.position_of(sub).is_none() {
        return Err(Error::NotMember);
    }
    let open_y = y.complement(sub);
    let open_x = x.complement(&map.preimage(sub));
    let extended = sheaf.extend_by_zero(x, &open_x)?;

    let (_, originals) = direct_images(map, sheaf)?;
    let pushed = originals
        .iter()
        .map(|r| r.extend_by_zero(y, &open_y))
        .collect::<Result<Vec<_>>>()?;
    check_cellular(map, space, &pushed)?;
    let (_, of_extended) = direct_images(map, &extended)?;
    let mut exchange_mismatch = None;
    for (q, (a, b)) in pushed.iter().zip(&of_extended).enumerate() {
        if let Some(m) = sheaf_difference(y, a, b) {
            exchange_mismatch = Some(format!("R^{q}: {m}"));
            break;
        }
    }

    let leray = compare_leray(map, &extended, space)?;
    let pushed_e2 = table_of(map, &pushed)?;
    let e2_mismatch = leray
        .e2()
        .first_difference(&pushed_e2)
        .map(|((p, q), a, b)| format!("({p},{q}): filtration side {a}, H^p(Y, j_!R^q) {b}"));

    let relative = cochains_on(x, sheaf, &open_x)?;
    let relative_cohomology = nonnegative(relative.cohomology_table());
    let relative_mismatch = (0..=x.max_dim() as i64)
        .map(|n| (n, leray.abutment.cohomology(n), relative_cohomology.get(&n).cloned().unwrap_or_default()))
        .find(|(_, a, b)| a != b)
        .map(|(n, a, b)| format!("H^{n}: abutment {a}, relative cochains {b}"));

    Ok(PairReport {
        leray,
        pushed_e2,
        relative_cohomology,
        exchange_mismatch,
        e2_mismatch,
        relative_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_site::Stalk;
    use crate::fixtures;

    #[test]
    fn torsion_coefficients_on_the_torus() {
        let f = fixtures::torus_over_circle();
        let sheaf = CellularSheaf::constant_with(f.source(), Stalk::cyclic(2));
        let report = compare_leray(&f, &sheaf, &FilteredSpace::dimension_skeleta(f.target())).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        assert!(!report.edge_map_checked());
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert_eq!(report.leray_e2.get(p, q), FgAbGroup::cyclic(2));
        }
        assert_eq!(
            report.abutment.cohomology(1),
            FgAbGroup::cyclic(2).direct_sum(&FgAbGroup::cyclic(2))
        );
    }

    #[test]
    fn constant_map_gives_cohomology_in_one_column() {
        let x = fixtures::klein_bottle();
        let f = CellularMap::to_point(&x);
        let point = FilteredSpace::dimension_skeleta(f.target());
        let report = compare_leray(&f, &CellularSheaf::constant(&x), &point).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        assert!(report.leray_e2.entries().keys().all(|&(p, _)| p == 0));
        assert_eq!(report.leray_e2.get(0, 2), FgAbGroup::cyclic(2));
    }
}
