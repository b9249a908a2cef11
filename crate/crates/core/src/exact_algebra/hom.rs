//! Homomorphisms between groups in invariant-factor coordinates.
//!
//! A group `G` is identified with `Z^n / R_G` where `R_G` is its diagonal
//! relation lattice, so kernels, images and homology of homomorphisms are
//! subquotients of `Z^n`.

use num_bigint::BigInt;

use super::group::check_hom_shape;
use super::{induced_map, FgAbGroup, IntMatrix, Subgroup, Subquotient};
use crate::error::{Error, Result};

fn relations(g: &FgAbGroup) -> Subgroup {
    Subgroup::new(g.num_generators(), g.relation_matrix())
}

/// A well-defined homomorphism `source → target` given by its matrix on
/// coordinate generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        check_hom_shape(&source, &target, &matrix)?;
        let rel_t = relations(&target);
        for (i, t) in source.torsion().iter().enumerate() {
            let image: Vec<BigInt> = matrix.column(i).into_iter().map(|x| x * t).collect();
            if !rel_t.contains(&image) {
                return Err(Error::NotCompatible(format!(
                    "generator of order {t} is sent to an element of different order"
                )));
            }
        }
        let matrix = target.reduce_columns(&matrix);
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            matrix: IntMatrix::zeros(target.num_generators(), source.num_generators()),
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.num_generators()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::Shape("composition of non-matching homomorphisms".into()));
        }
        GroupHom::new(inner.source.clone(), self.target.clone(), &self.matrix * &inner.matrix)
    }

    pub fn kernel(&self) -> Subquotient {
        let num = Subgroup::preimage(&self.matrix, &relations(&self.target));
        Subquotient::new(num, relations(&self.source)).expect("relations lie in the kernel")
    }

    pub fn image(&self) -> Subquotient {
        let rel = self.target.relation_matrix();
        let num = Subgroup::new(self.target.num_generators(), self.matrix.hstack(&rel));
        Subquotient::new(num, relations(&self.target)).expect("relations lie in the image")
    }

    pub fn cokernel(&self) -> Subquotient {
        let rel = self.target.relation_matrix();
        let den = Subgroup::new(self.target.num_generators(), self.matrix.hstack(&rel));
        Subquotient::new(Subgroup::full(self.target.num_generators()), den)
            .expect("image lies in the target")
    }

    pub fn is_zero(&self) -> bool {
        self.image().group().is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Image and cokernel classes, the invariants used to compare maps that
    /// live on different (but isomorphic) groups.
    pub fn invariants(&self) -> (FgAbGroup, FgAbGroup) {
        (self.image().group().clone(), self.cokernel().group().clone())
    }

    /// Equality as homomorphisms (entries compared modulo target relations).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.target.reduce_columns(&self.matrix.sub(&other.matrix)).is_zero()
    }
}

/// Homology `ker(outgoing) / im(incoming)` at the middle group.
pub fn homology(incoming: &GroupHom, outgoing: &GroupHom) -> Result<Subquotient> {
    if incoming.target != outgoing.source {
        return Err(Error::Shape("homology of non-composable homomorphisms".into()));
    }
    let middle = &incoming.target;
    let num = Subgroup::preimage(&outgoing.matrix, &relations(&outgoing.target));
    let den = Subgroup::new(
        middle.num_generators(),
        incoming.matrix.hstack(&middle.relation_matrix()),
    );
    Subquotient::new(num, den)
}

/// Whether `A → B → C` is exact at `B`.
pub fn is_exact_at(incoming: &GroupHom, outgoing: &GroupHom) -> bool {
    match homology(incoming, outgoing) {
        Ok(h) => h.group().is_zero(),
        Err(_) => false,
    }
}

/// Re-expresses the ambient map `f` between two subquotients as a
/// homomorphism of their coordinate groups.
pub fn hom_between(f: &IntMatrix, source: &Subquotient, target: &Subquotient) -> Result<GroupHom> {
    let m = induced_map(f, source, target)?;
    GroupHom::new(source.group().clone(), target.group().clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_image_cokernel_of_doubling() {
        // Z/4 --2--> Z/4: kernel and image are Z/2, cokernel Z/2.
        let g = FgAbGroup::cyclic(4);
        let h = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(h.kernel().group(), &FgAbGroup::cyclic(2));
        assert_eq!(h.image().group(), &FgAbGroup::cyclic(2));
        assert_eq!(h.cokernel().group(), &FgAbGroup::cyclic(2));
        assert!(!h.is_injective());
    }

    #[test]
    fn rejects_ill_defined_maps() {
        // Z/2 -> Z cannot send the generator to 1.
        let r = GroupHom::new(FgAbGroup::cyclic(2), FgAbGroup::free(1), IntMatrix::identity(1));
        assert!(r.is_err());
        // Z/2 -> Z/4, 1 -> 2 is fine.
        let ok = GroupHom::new(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), IntMatrix::from_rows(&[vec![2]]));
        assert!(ok.is_ok());
    }

    #[test]
    fn short_exact_sequence() {
        // 0 -> Z --2--> Z -> Z/2 -> 0
        let z = FgAbGroup::free(1);
        let z2 = FgAbGroup::cyclic(2);
        let zero = FgAbGroup::zero();
        let a = GroupHom::zero(&zero, &z);
        let b = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let c = GroupHom::new(z.clone(), z2.clone(), IntMatrix::from_rows(&[vec![1]])).unwrap();
        let d = GroupHom::zero(&z2, &zero);
        assert!(is_exact_at(&a, &b));
        assert!(is_exact_at(&b, &c));
        assert!(is_exact_at(&c, &d));
        assert!(!is_exact_at(&a, &GroupHom::zero(&z, &z)));
    }
}
