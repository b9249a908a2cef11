use std::collections::BTreeMap;

use super::CellularMap;
use crate::cell_site::{poset_cochains, CellComplex, CellularSheaf, SheafCochains, Stalk};
use crate::error::{Error, Result};
use crate::exact_algebra::{induced_map, Subquotient};

/// Cohomology of `F` on every star preimage `f⁻¹(↑σ)`, with the cochains it
/// was computed from.
pub(crate) struct LocalCohomology {
    pub cochains: Vec<SheafCochains>,
    // [σ][q]
    pub groups: Vec<Vec<Subquotient>>,
    pub top: i64,
}

pub(crate) fn local_cohomology(map: &CellularMap, sheaf: &CellularSheaf) -> Result<LocalCohomology> {
    let (source, target) = (map.source(), map.target());
    if sheaf.len() != source.len() {
        return Err(Error::MalformedSheaf("sheaf does not live on the source of the map".into()));
    }
    let top = source.max_dim() as i64;
    let mut cochains = Vec::with_capacity(target.len());
    let mut groups = Vec::with_capacity(target.len());
    for sigma in 0..target.len() {
        let u = map.star_preimage(sigma);
        debug_assert!(source.is_open(&u));
        let c = poset_cochains(source, sheaf, &u)?;
        groups.push((0..=top).map(|q| c.complex().cohomology(q)).collect());
        cochains.push(c);
    }
    Ok(LocalCohomology { cochains, groups, top })
}

pub(crate) fn sheaf_in_degree(target: &CellComplex, local: &LocalCohomology, q: i64) -> Result<CellularSheaf> {
    let stalk_of = |s: usize| -> Result<Stalk> {
        match local.groups[s].get(q as usize) {
            Some(h) => Stalk::new(h.group().num_generators(), h.group().relation_matrix()),
            None => Ok(Stalk::free(0)),
        }
    };
    let stalks = (0..target.len()).map(stalk_of).collect::<Result<Vec<_>>>()?;
    let mut restrictions = BTreeMap::new();
    if q <= local.top {
        for tau in 0..target.len() {
            for &(sigma, _) in target.faces(tau) {
                let (cs, ct) = (&local.cochains[sigma], &local.cochains[tau]);
                let projection = cs.projection_to(ct, q);
                let (hs, ht) = (&local.groups[sigma][q as usize], &local.groups[tau][q as usize]);
                let m = induced_map(&projection, hs, ht)?;
                restrictions.insert((sigma, tau), m);
            }
        }
    }
    CellularSheaf::new(target, stalks, restrictions)
}

/// `R^q f_* F`: the stalk at `σ` is `H^q(f⁻¹(↑σ), F)` and the restriction
/// along `σ ⋖ τ` is induced by the inclusion `f⁻¹(↑τ) ⊆ f⁻¹(↑σ)`.
pub fn higher_direct_image(map: &CellularMap, sheaf: &CellularSheaf, q: i64) -> Result<CellularSheaf> {
    if q < 0 {
        return Ok(CellularSheaf::zero(map.target()));
    }
    let local = local_cohomology(map, sheaf)?;
    sheaf_in_degree(map.target(), &local, q)
}

/// `R^q f_* F` for `q = 0 ..= dim X`; all higher ones vanish.
pub fn higher_direct_images(map: &CellularMap, sheaf: &CellularSheaf) -> Result<Vec<CellularSheaf>> {
    let local = local_cohomology(map, sheaf)?;
    (0..=local.top).map(|q| sheaf_in_degree(map.target(), &local, q)).collect()
}

/// The first difference between two sheaves on the same complex: stalks
/// must have the same presentation and restrictions must agree modulo the
/// relations of their targets.
pub fn sheaf_difference(complex: &CellComplex, a: &CellularSheaf, b: &CellularSheaf) -> Option<String> {
    for c in 0..complex.len() {
        if a.stalk(c) != b.stalk(c) {
            return Some(format!(
                "stalks at {} differ: {} vs {}",
                complex.id(c),
                a.stalk(c).group(),
                b.stalk(c).group()
            ));
        }
    }
    for t in 0..complex.len() {
        let lattice = a.stalk(t).relation_lattice();
        for &(s, _) in complex.faces(t) {
            let (ma, mb) = (a.restriction(s, t), b.restriction(s, t));
            let agree = match (ma, mb) {
                (Some(x), Some(y)) => x.sub(y).columns().all(|c| lattice.contains(&c)),
                _ => false,
            };
            if !agree {
                return Some(format!("restrictions {} -> {} differ", complex.id(s), complex.id(t)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    use crate::exact_algebra::FgAbGroup;
    use crate::fixtures;

    #[test]
    fn identity_pushes_forward_to_itself() {
        let (x, sheaf) = fixtures::twisted_circle_sheaf();
        let id = CellularMap::identity(&x);
        let images = higher_direct_images(&id, &sheaf).unwrap();
        assert_eq!(sheaf_difference(&x, &images[0], &sheaf), None);
        assert!(images[1].stalks().iter().all(|s| s.group().is_zero()));
    }

    #[test]
    fn klein_bottle_has_twisted_first_direct_image() {
        let f = fixtures::klein_bottle_over_circle();
        let r1 = higher_direct_image(&f, &CellularSheaf::constant(f.source()), 1).unwrap();
        assert!(r1.stalks().iter().all(|s| s.group() == FgAbGroup::free(1)));
        // Going around the base composes the restrictions to -1.
        let y = f.target();
        let id = |s: &str| y.index_of(s).unwrap();
        let m = |s: &str, t: &str| r1.restriction(id(s), id(t)).unwrap()[(0, 0)].clone();
        let loop_sign = m("v0", "e0") * m("v1", "e0") * m("v1", "e1") * m("v0", "e1");
        assert_eq!(loop_sign, BigInt::from(-1));
    }
}
