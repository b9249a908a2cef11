use std::collections::BTreeMap;

use super::{CochainComplex, Filtration, Page, SpectralSequence};
use crate::error::{Error, Result};
use crate::exact_algebra::{hom_between, GroupHom, IntMatrix};

/// The morphism `E_r(K, F) → E_r(K', F')` induced by a filtered chain map.
#[derive(Clone, Debug)]
pub struct PageMap {
    pub source: Page,
    pub target: Page,
    pub maps: BTreeMap<(i64, i64), GroupHom>,
}

impl PageMap {
    pub fn r(&self) -> usize {
        self.source.r()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.maps.values().all(GroupHom::is_isomorphism)
            && self
                .target
                .nonzero_entries()
                .all(|(k, _)| self.maps.contains_key(k))
    }

    /// Checks `φ ∘ d_r = d'_r ∘ φ` at every entry of the source page.
    pub fn commutes_with_differentials(&self) -> Result<bool> {
        for (&(p, q), phi) in &self.maps {
            let (tp, tq) = self.source.target(p, q);
            let Some(phi_t) = self.maps.get(&(tp, tq)) else {
                continue;
            };
            let lhs = phi_t.compose(&self.source.differential(p, q)?)?;
            let rhs = self.target.differential(p, q)?.compose(phi)?;
            if !lhs.same_map(&rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn component(phi: &[IntMatrix], source: &CochainComplex, target: &CochainComplex, n: i64) -> IntMatrix {
    let i = n - source.n_min();
    if i >= 0 && (i as usize) < phi.len() {
        phi[i as usize].clone()
    } else {
        IntMatrix::zeros(target.dim(n), source.dim(n))
    }
}

/// Page `r` of the map of spectral sequences induced by `phi`, where
/// `phi[i]: K^{n_min + i} → K'^{n_min + i}` is given in the source's degree
/// range. Checks that `phi` is a chain map and respects the filtrations.
pub fn map_of_pages(
    phi: &[IntMatrix],
    source: (&CochainComplex, &Filtration),
    target: (&CochainComplex, &Filtration),
    r: usize,
) -> Result<PageMap> {
    let (k, f) = source;
    let (k2, f2) = target;
    if phi.len() != k.dims().len() {
        return Err(Error::Shape(format!(
            "{} components for a complex with {} degrees",
            phi.len(),
            k.dims().len()
        )));
    }
    let lo = k.n_min().min(k2.n_min());
    let hi = k.n_max().max(k2.n_max());
    for n in lo..=hi {
        let m = component(phi, k, k2, n);
        if m.rows() != k2.dim(n) || m.cols() != k.dim(n) {
            return Err(Error::Shape(format!(
                "component in degree {n} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                k2.dim(n),
                k.dim(n)
            )));
        }
        let next = component(phi, k, k2, n + 1);
        if &k2.differential(n) * &m != &next * &k.differential(n) {
            return Err(Error::NotFiltered(format!("not a chain map in degree {n}")));
        }
        let p_lo = f.p_min().min(f2.p_min());
        let p_hi = f.p_max().max(f2.p_max());
        for p in p_lo..=p_hi {
            if !f.level(p, n).image(&m).is_subgroup_of(&f2.level(p, n)) {
                return Err(Error::NotFiltered(format!(
                    "F^{p} K^{n} is not mapped into F^{p} K'^{n}"
                )));
            }
        }
    }
    let mut src = SpectralSequence::new(k, f)?;
    let mut tgt = SpectralSequence::new(k2, f2)?;
    let source_page = src.page(r)?;
    let target_page = tgt.page(r)?;
    let mut maps = BTreeMap::new();
    for (&(p, q), entry) in source_page.entries() {
        let target_entry = match target_page.entry(p, q) {
            Some(e) => e.clone(),
            None => tgt.entry(r, p, q)?,
        };
        let m = component(phi, k, k2, p + q);
        maps.insert((p, q), hom_between(&m, entry, &target_entry)?);
    }
    Ok(PageMap {
        source: source_page.into_page(),
        target: target_page.into_page(),
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Subgroup;

    #[test]
    fn identity_induces_identity() {
        let k = CochainComplex::new(0, vec![2, 1], vec![IntMatrix::from_rows(&[vec![1, 2]])]).unwrap();
        let f = Filtration::basis_aligned(&k, &[vec![0, 1], vec![1]]).unwrap();
        let phi = vec![IntMatrix::identity(2), IntMatrix::identity(1)];
        for r in 1..=3 {
            let m = map_of_pages(&phi, (&k, &f), (&k, &f), r).unwrap();
            assert!(m.is_isomorphism());
            assert!(m.commutes_with_differentials().unwrap());
            for h in m.maps.values() {
                assert!(h.same_map(&GroupHom::identity(h.source())));
            }
        }
    }

    #[test]
    fn rejects_maps_that_lower_filtration() {
        let k = CochainComplex::new(0, vec![1], vec![]).unwrap();
        let f = Filtration::new(&k, 0, 1, vec![vec![Subgroup::full(1), Subgroup::full(1)]]).unwrap();
        let g = Filtration::trivial(&k);
        let r = map_of_pages(&[IntMatrix::identity(1)], (&k, &f), (&k, &g), 1);
        assert!(matches!(r, Err(Error::NotFiltered(_))));
    }
}
