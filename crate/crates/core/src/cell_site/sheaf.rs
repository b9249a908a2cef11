use std::collections::{BTreeMap, HashMap};

use super::{CellComplex, CellSet};
use crate::error::{Error, Result};
use crate::exact_algebra::{cokernel, FgAbGroup, IntMatrix, Subgroup};

/// A presented abelian group `Z^gens / (column span of relations)`.
///
/// Relations are kept as a basis of the relation lattice, so the relation
/// matrix always has full column rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stalk {
    gens: usize,
    relations: IntMatrix,
}

impl Stalk {
    pub fn new(gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::MalformedSheaf(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        let relations = Subgroup::new(gens, relations).basis().clone();
        Ok(Stalk { gens, relations })
    }

    pub fn free(gens: usize) -> Self {
        Stalk {
            gens,
            relations: IntMatrix::zeros(gens, 0),
        }
    }

    /// `Z/n` for `n ≥ 2`, or `Z` for `n = 0`.
    pub fn cyclic(n: i64) -> Self {
        if n == 0 {
            return Stalk::free(1);
        }
        Stalk::new(1, IntMatrix::from_rows(&[vec![n]])).expect("cyclic stalk")
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_lattice(&self) -> Subgroup {
        Subgroup::new(self.gens, self.relations.clone())
    }

    pub fn is_free(&self) -> bool {
        self.relations.cols() == 0
    }

    pub fn group(&self) -> FgAbGroup {
        cokernel(&self.relations)
    }
}

/// A cellular sheaf: a presented stalk on every cell and a restriction map
/// `F(σ) → F(τ)` for every face relation `σ ⋖ τ`, functorial on the face
/// order up to the relations of the target stalk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularSheaf {
    stalks: Vec<Stalk>,
    restrictions: BTreeMap<(usize, usize), IntMatrix>,
    // F(σ) → F(τ) for all σ ≤ τ
    order_maps: HashMap<(usize, usize), IntMatrix>,
}

impl CellularSheaf {
    /// Validates shapes, compatibility with relations and commutativity of
    /// all composites along the face order. Restrictions between nonzero
    /// stalks must be given for every incidence; missing ones between cells
    /// where either stalk has no generators are zero.
    pub fn new(
        complex: &CellComplex,
        stalks: Vec<Stalk>,
        restrictions: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Self> {
        if stalks.len() != complex.len() {
            return Err(Error::MalformedSheaf(format!(
                "{} stalks for {} cells",
                stalks.len(),
                complex.len()
            )));
        }
        let name = |c: usize| complex.id(c);
        for (&(s, t), m) in &restrictions {
            if s >= complex.len() || t >= complex.len() || complex.incidence(s, t) == 0 {
                return Err(Error::MalformedSheaf(format!(
                    "restriction given for a pair that is not a face incidence ({} -> {})",
                    if s < complex.len() { name(s) } else { "?" },
                    if t < complex.len() { name(t) } else { "?" },
                )));
            }
            if m.rows() != stalks[t].gens || m.cols() != stalks[s].gens {
                return Err(Error::MalformedSheaf(format!(
                    "restriction {} -> {} is {}x{}, expected {}x{}",
                    name(s),
                    name(t),
                    m.rows(),
                    m.cols(),
                    stalks[t].gens,
                    stalks[s].gens
                )));
            }
            let target = stalks[t].relation_lattice();
            for r in stalks[s].relations.columns() {
                if !target.contains(&m.mul_vec(&r)) {
                    return Err(Error::MalformedSheaf(format!(
                        "restriction {} -> {} does not respect the relations of {}",
                        name(s),
                        name(t),
                        name(s)
                    )));
                }
            }
        }
        let mut full = restrictions.clone();
        for t in 0..complex.len() {
            for &(s, _) in complex.faces(t) {
                if full.contains_key(&(s, t)) {
                    continue;
                }
                if stalks[s].gens > 0 && stalks[t].gens > 0 {
                    return Err(Error::MalformedSheaf(format!(
                        "missing restriction {} -> {}",
                        name(s),
                        name(t)
                    )));
                }
                full.insert((s, t), IntMatrix::zeros(stalks[t].gens, stalks[s].gens));
            }
        }
        let mut order: Vec<usize> = (0..complex.len()).collect();
        order.sort_by_key(|&c| complex.dim(c));
        let mut order_maps: HashMap<(usize, usize), IntMatrix> = HashMap::new();
        for (s, stalk) in stalks.iter().enumerate() {
            order_maps.insert((s, s), IntMatrix::identity(stalk.gens));
        }
        for &t in &order {
            let lattice = stalks[t].relation_lattice();
            for s in complex.closure_of(t).iter().copied().filter(|&s| s != t) {
                let mut found: Option<(usize, IntMatrix)> = None;
                for &(r, _) in complex.faces(t) {
                    if !complex.leq(s, r) {
                        continue;
                    }
                    let m = &full[&(r, t)] * &order_maps[&(s, r)];
                    match &found {
                        None => found = Some((r, m)),
                        Some((r0, m0)) => {
                            let diff = m.sub(m0);
                            if !diff.columns().all(|c| lattice.contains(&c)) {
                                return Err(Error::MalformedSheaf(format!(
                                    "restrictions from {} to {} through {} and {} disagree",
                                    name(s),
                                    name(t),
                                    name(*r0),
                                    name(r)
                                )));
                            }
                        }
                    }
                }
                let (_, m) = found.expect("every proper face lies below some facet");
                order_maps.insert((s, t), m);
            }
        }
        Ok(CellularSheaf {
            stalks,
            restrictions: full,
            order_maps,
        })
    }

    /// The constant sheaf with stalk `Z` and identity restrictions.
    pub fn constant(complex: &CellComplex) -> Self {
        Self::constant_with(complex, Stalk::free(1))
    }

    /// The constant sheaf with the given stalk.
    pub fn constant_with(complex: &CellComplex, stalk: Stalk) -> Self {
        let stalks = vec![stalk.clone(); complex.len()];
        let restrictions = (0..complex.len())
            .flat_map(|t| complex.faces(t).iter().map(move |&(s, _)| ((s, t), IntMatrix::identity(stalk.gens))))
            .collect();
        CellularSheaf::new(complex, stalks, restrictions).expect("constant sheaf")
    }

    pub fn zero(complex: &CellComplex) -> Self {
        CellularSheaf::new(complex, vec![Stalk::free(0); complex.len()], BTreeMap::new()).expect("zero sheaf")
    }

    pub fn len(&self) -> usize {
        self.stalks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stalks.is_empty()
    }

    pub fn stalk(&self, cell: usize) -> &Stalk {
        &self.stalks[cell]
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.stalks
    }

    pub fn is_free(&self) -> bool {
        self.stalks.iter().all(Stalk::is_free)
    }

    /// Restriction along a face incidence `σ ⋖ τ`.
    pub fn restriction(&self, sigma: usize, tau: usize) -> Option<&IntMatrix> {
        self.restrictions.get(&(sigma, tau))
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), IntMatrix> {
        &self.restrictions
    }

    /// The map `F(σ) → F(τ)` for `σ ≤ τ`, composed along any chain of faces.
    pub fn map(&self, sigma: usize, tau: usize) -> Option<&IntMatrix> {
        self.order_maps.get(&(sigma, tau))
    }

    /// `j_! (F|_U)` for an open set `U`: stalks outside `U` become zero.
    pub fn extend_by_zero(&self, complex: &CellComplex, open: &CellSet) -> Result<Self> {
        if !complex.is_open(open) {
            let bad: CellSet = complex.up_closure(open).difference(open).copied().collect();
            return Err(Error::NotOpen(format!(
                "cofaces {} of the given cells are missing",
                complex.describe(&bad)
            )));
        }
        let stalks = (0..self.len())
            .map(|c| if open.contains(&c) { self.stalks[c].clone() } else { Stalk::free(0) })
            .collect();
        let restrictions = self
            .restrictions
            .iter()
            .filter(|((s, t), _)| open.contains(s) && open.contains(t))
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        CellularSheaf::new(complex, stalks, restrictions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stalk_groups() {
        assert_eq!(Stalk::cyclic(4).group(), FgAbGroup::cyclic(4));
        assert_eq!(Stalk::free(2).group(), FgAbGroup::free(2));
        let s = Stalk::new(2, IntMatrix::from_rows(&[vec![2, 0, 2], vec![0, 3, 3]])).unwrap();
        assert_eq!(s.group(), FgAbGroup::cyclic(6));
        assert_eq!(s.relations().cols(), 2);
    }

    #[test]
    fn restrictions_must_respect_relations() {
        let x = CellComplex::interval();
        let stalks = vec![Stalk::cyclic(2), Stalk::free(1), Stalk::free(1)];
        let e = x.index_of("e").unwrap();
        let mut r = BTreeMap::new();
        r.insert((0, e), IntMatrix::identity(1));
        r.insert((1, e), IntMatrix::identity(1));
        assert!(CellularSheaf::new(&x, stalks, r).is_err());
    }

    #[test]
    fn extension_by_zero_needs_open_sets() {
        let x = CellComplex::interval();
        let f = CellularSheaf::constant(&x);
        assert!(matches!(
            f.extend_by_zero(&x, &x.cell_set(&["v0"]).unwrap()),
            Err(Error::NotOpen(_))
        ));
        let g = f.extend_by_zero(&x, &x.cell_set(&["v0", "e"]).unwrap()).unwrap();
        assert_eq!(g.stalk(1).gens(), 0);
    }
}
