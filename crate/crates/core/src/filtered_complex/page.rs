use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{CochainComplex, Filtration};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    homology, induced_map, Coefficients, FgAbGroup, GroupHom, IntMatrix, Subgroup, Subquotient,
};

/// One page `(E_r, d_r)` of a spectral sequence: groups `E_r^{p,q}` in
/// invariant-factor coordinates and differentials of bidegree `(r, 1 - r)`.
///
/// Entries that are not stored are zero; differentials are keyed by their
/// source and, when absent, are zero maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    r: usize,
    groups: BTreeMap<(i64, i64), FgAbGroup>,
    differentials: BTreeMap<(i64, i64), IntMatrix>,
}

impl Page {
    pub fn new(
        r: usize,
        groups: BTreeMap<(i64, i64), FgAbGroup>,
        differentials: BTreeMap<(i64, i64), IntMatrix>,
    ) -> Self {
        Page {
            r,
            groups,
            differentials,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Where `d_r` starting at `(p, q)` lands.
    pub fn target(&self, p: i64, q: i64) -> (i64, i64) {
        let r = self.r as i64;
        (p + r, q - r + 1)
    }

    pub fn group(&self, p: i64, q: i64) -> FgAbGroup {
        self.groups.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn groups(&self) -> &BTreeMap<(i64, i64), FgAbGroup> {
        &self.groups
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(i64, i64), &FgAbGroup)> {
        self.groups.iter().filter(|(_, g)| !g.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.groups.values().all(FgAbGroup::is_zero)
    }

    pub fn differential_matrices(&self) -> &BTreeMap<(i64, i64), IntMatrix> {
        &self.differentials
    }

    /// `d_r: E_r^{p,q} → E_r^{p+r, q-r+1}`.
    pub fn differential(&self, p: i64, q: i64) -> Result<GroupHom> {
        let source = self.group(p, q);
        let (tp, tq) = self.target(p, q);
        let target = self.group(tp, tq);
        match self.differentials.get(&(p, q)) {
            Some(m) => GroupHom::new(source, target, m.clone()),
            None => Ok(GroupHom::zero(&source, &target)),
        }
    }

    /// Whether every differential on the page vanishes.
    pub fn differentials_vanish(&self) -> Result<bool> {
        for &(p, q) in self.groups.keys() {
            if !self.differential(p, q)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Homology of `(E_r, d_r)` at `(p, q)`.
    pub fn homology(&self, p: i64, q: i64) -> Result<FgAbGroup> {
        let r = self.r as i64;
        let outgoing = self.differential(p, q)?;
        let incoming = self.differential(p - r, q + r - 1)?;
        Ok(homology(&incoming, &outgoing)?.group().clone())
    }

    /// Checks `d_r ∘ d_r = 0` everywhere.
    pub fn check_square_zero(&self) -> Result<()> {
        for &(p, q) in self.groups.keys() {
            let first = self.differential(p, q)?;
            let (tp, tq) = self.target(p, q);
            let second = self.differential(tp, tq)?;
            if !second.compose(&first)?.is_zero() {
                return Err(Error::NotCompatible(format!("d_{} ∘ d_{} ≠ 0 at ({p}, {q})", self.r, self.r)));
            }
        }
        Ok(())
    }

    /// `Σ_{p,q} (-1)^{p+q} rank E_r^{p,q}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&(p, q), g)| if (p + q).rem_euclid(2) == 0 { g.rank() as i64 } else { -(g.rank() as i64) })
            .sum()
    }

    /// The page seen with the given coefficients (ranks only over Q).
    pub fn with_coefficients(&self, c: Coefficients) -> Page {
        match c {
            Coefficients::Integers => self.clone(),
            Coefficients::Rationals => {
                let groups = self.groups.iter().map(|(k, g)| (*k, g.rationalized())).collect();
                let differentials = self
                    .differentials
                    .iter()
                    .filter_map(|(&(p, q), _)| {
                        let d = self.differential(p, q).ok()?;
                        let rank = d.image().group().rank();
                        let (tp, tq) = self.target(p, q);
                        let (rs, rt) = (self.group(p, q).rank(), self.group(tp, tq).rank());
                        let mut m = IntMatrix::zeros(rt, rs);
                        for i in 0..rank.min(rs).min(rt) {
                            m[(i, i)] = 1.into();
                        }
                        Some(((p, q), m))
                    })
                    .collect();
                Page::new(self.r, groups, differentials)
            }
        }
    }

    /// Compares two pages up to isomorphism: every group must agree and every
    /// pair of corresponding differentials must have the same image and
    /// cokernel. Returns the first discrepancy.
    pub fn compare(&self, other: &Page) -> Result<Option<String>> {
        let keys: std::collections::BTreeSet<_> =
            self.groups.keys().chain(other.groups.keys()).copied().collect();
        for &(p, q) in &keys {
            let (a, b) = (self.group(p, q), other.group(p, q));
            if a != b {
                return Ok(Some(format!("E_{}^{{{p},{q}}}: {a} vs {b}", self.r)));
            }
        }
        for &(p, q) in &keys {
            let da = self.differential(p, q)?.invariants();
            let db = other.differential(p, q)?.invariants();
            if da != db {
                return Ok(Some(format!(
                    "d_{} at ({p},{q}): image {} / cokernel {} vs image {} / cokernel {}",
                    self.r, da.0, da.1, db.0, db.1
                )));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "E_{}:", self.r)?;
        for ((p, q), g) in self.nonzero_entries() {
            writeln!(f, "  ({p},{q}) {g}")?;
        }
        for &(p, q) in self.differentials.keys() {
            if let Ok(d) = self.differential(p, q) {
                let image = d.image().group().clone();
                if !image.is_zero() {
                    let (tp, tq) = self.target(p, q);
                    writeln!(f, "  d_{}: ({p},{q}) -> ({tp},{tq}) image {image}", self.r)?;
                }
            }
        }
        Ok(())
    }
}

/// A page of the spectral sequence of a filtered complex, with each entry
/// kept as an explicit subquotient `Z_r / B_r` of the cochain module.
#[derive(Clone, Debug)]
pub struct FilteredPage {
    page: Page,
    entries: BTreeMap<(i64, i64), Subquotient>,
}

impl FilteredPage {
    pub fn page(&self) -> &Page {
        &self.page
    }

    pub fn into_page(self) -> Page {
        self.page
    }

    pub fn entry(&self, p: i64, q: i64) -> Option<&Subquotient> {
        self.entries.get(&(p, q))
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), Subquotient> {
        &self.entries
    }
}

/// Lazily evaluated spectral sequence of a filtered complex.
///
/// With `Z_r^{p,n} = F^p K^n ∩ d⁻¹(F^{p+r} K^{n+1})`, the entries are
/// `E_r^{p,q} = Z_r^{p,p+q} / (Z_{r-1}^{p+1,p+q} + d Z_{r-1}^{p-r+1,p+q-1})`
/// and `d_r` is induced by `d`. Cycle groups are cached across pages.
pub struct SpectralSequence<'a> {
    complex: &'a CochainComplex,
    filtration: &'a Filtration,
    cycles: HashMap<(i64, i64, i64), Subgroup>,
}

impl<'a> SpectralSequence<'a> {
    pub fn new(complex: &'a CochainComplex, filtration: &'a Filtration) -> Result<Self> {
        filtration.validate(complex)?;
        Ok(SpectralSequence {
            complex,
            filtration,
            cycles: HashMap::new(),
        })
    }

    pub fn complex(&self) -> &CochainComplex {
        self.complex
    }

    pub fn filtration(&self) -> &Filtration {
        self.filtration
    }

    /// A page index from which on all pages agree with `E_∞`.
    pub fn stabilization_page(&self) -> usize {
        (self.filtration.width() + 2) as usize
    }

    /// `Z_r^{p}` in total degree `n`.
    pub fn cycles(&mut self, r: i64, p: i64, n: i64) -> Subgroup {
        // r ≤ 0 gives F^p itself, and r beyond the top level gives F^p ∩ ker d.
        let r = r.clamp(0, (self.filtration.p_max() + 1 - p).max(0));
        if let Some(z) = self.cycles.get(&(r, p, n)) {
            return z.clone();
        }
        let f = self.filtration.level(p, n);
        let z = f.preimage_within(&self.complex.differential(n), &self.filtration.level(p + r, n + 1));
        self.cycles.insert((r, p, n), z.clone());
        z
    }

    /// `B_r^{p}` in total degree `n`.
    pub fn boundaries(&mut self, r: i64, p: i64, n: i64) -> Subgroup {
        let upper = self.cycles(r - 1, p + 1, n);
        let lower = self.cycles(r - 1, p - r + 1, n - 1);
        upper.sum(&lower.image(&self.complex.differential(n - 1)))
    }

    pub fn entry(&mut self, r: usize, p: i64, q: i64) -> Result<Subquotient> {
        let (r, n) = (r as i64, p + q);
        let z = self.cycles(r, p, n);
        let b = self.boundaries(r, p, n);
        Subquotient::new(z, b)
    }

    pub fn page(&mut self, r: usize) -> Result<FilteredPage> {
        let mut entries = BTreeMap::new();
        for n in self.complex.degrees() {
            if self.complex.dim(n) == 0 {
                continue;
            }
            for p in self.filtration.p_range() {
                entries.insert((p, n - p), self.entry(r, p, n - p)?);
            }
        }
        let ri = r as i64;
        let mut differentials = BTreeMap::new();
        for (&(p, q), source) in &entries {
            let target_key = (p + ri, q - ri + 1);
            if let Some(target) = entries.get(&target_key) {
                let d = self.complex.differential(p + q);
                let m = induced_map(&d, source, target)?;
                differentials.insert((p, q), m);
            }
        }
        let groups = entries.iter().map(|(k, s)| (*k, s.group().clone())).collect();
        Ok(FilteredPage {
            page: Page::new(r, groups, differentials),
            entries,
        })
    }

    /// Pages `1..=r_max`.
    pub fn pages(&mut self, r_max: usize) -> Result<Vec<FilteredPage>> {
        (1..=r_max).map(|r| self.page(r)).collect()
    }
}

/// `E_r(K, F)`.
pub fn page(complex: &CochainComplex, filtration: &Filtration, r: usize) -> Result<FilteredPage> {
    SpectralSequence::new(complex, filtration)?.page(r)
}

/// `E_1, ..., E_{r_max}` of `(K, F)`.
pub fn pages(complex: &CochainComplex, filtration: &Filtration, r_max: usize) -> Result<Vec<FilteredPage>> {
    SpectralSequence::new(complex, filtration)?.pages(r_max)
}

/// Checks `H(E_r, d_r) ≅ E_{r+1}` entrywise for consecutive pages.
pub fn check_page_recursion(current: &Page, next: &Page) -> Result<Option<String>> {
    let keys: std::collections::BTreeSet<_> =
        current.groups().keys().chain(next.groups().keys()).copied().collect();
    for (p, q) in keys {
        let h = current.homology(p, q)?;
        let e = next.group(p, q);
        if h != e {
            return Ok(Some(format!(
                "H(E_{}) at ({p},{q}) is {h} but E_{} is {e}",
                current.r(),
                next.r()
            )));
        }
    }
    Ok(None)
}
