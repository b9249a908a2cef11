use std::sync::OnceLock;

use num_bigint::BigInt;

use super::{smith_normal_form, HermiteBasis, IntMatrix};

/// A subgroup of the free module `Z^ambient`, given by generator columns.
///
/// The Hermite basis is computed on first use and cached; equality and
/// membership go through it.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: usize,
    generators: IntMatrix,
    hermite: OnceLock<HermiteBasis>,
}

impl Subgroup {
    pub fn new(ambient: usize, generators: IntMatrix) -> Self {
        assert_eq!(
            generators.rows(),
            ambient,
            "generator columns must live in Z^{ambient}"
        );
        Subgroup {
            ambient,
            generators,
            hermite: OnceLock::new(),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self::new(ambient, IntMatrix::from_columns(ambient, vectors))
    }

    pub fn full(ambient: usize) -> Self {
        Self::new(ambient, IntMatrix::identity(ambient))
    }

    pub fn zero(ambient: usize) -> Self {
        Self::new(ambient, IntMatrix::zeros(ambient, 0))
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let cols: Vec<usize> = indices.into_iter().collect();
        Self::new(ambient, IntMatrix::identity(ambient).select_columns(&cols))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn hermite(&self) -> &HermiteBasis {
        self.hermite.get_or_init(|| HermiteBasis::new(&self.generators))
    }

    /// A Z-basis (the Hermite basis columns).
    pub fn basis(&self) -> &IntMatrix {
        self.hermite().basis()
    }

    pub fn rank(&self) -> usize {
        self.hermite().rank()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.hermite().contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        self.basis().columns().all(|c| other.contains(&c))
    }

    /// Replaces the generators by the Hermite basis.
    pub fn canonical(&self) -> Subgroup {
        let h = self.hermite().clone();
        let generators = h.basis().clone();
        let cell = OnceLock::new();
        let _ = cell.set(h);
        Subgroup {
            ambient: self.ambient,
            generators,
            hermite: cell,
        }
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subgroup::new(self.ambient, self.basis().hstack(other.basis())).canonical()
    }

    /// Image of the subgroup under `f: Z^ambient -> Z^m`.
    pub fn image(&self, f: &IntMatrix) -> Subgroup {
        assert_eq!(f.cols(), self.ambient, "map source mismatch");
        Subgroup::new(f.rows(), f * self.basis()).canonical()
    }

    /// `{x ∈ Z^{f.cols} : f x ∈ target}`.
    pub fn preimage(f: &IntMatrix, target: &Subgroup) -> Subgroup {
        assert_eq!(f.rows(), target.ambient, "map target mismatch");
        let n = f.cols();
        let stacked = f.hstack(&target.basis().neg());
        let kernel = smith_normal_form(&stacked).kernel_basis();
        let top = kernel.row_range(0, n);
        Subgroup::new(n, top).canonical()
    }

    /// `{x ∈ self : f x ∈ target}`.
    pub fn preimage_within(&self, f: &IntMatrix, target: &Subgroup) -> Subgroup {
        let b = self.basis();
        let inner = Subgroup::preimage(&(f * b), target);
        Subgroup::new(self.ambient, b * inner.basis()).canonical()
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        self.preimage_within(&IntMatrix::identity(self.ambient), other)
    }

    /// The integer kernel of `f` as a subgroup of `Z^{f.cols}`.
    pub fn kernel(f: &IntMatrix) -> Subgroup {
        Subgroup::new(f.cols(), smith_normal_form(f).kernel_basis()).canonical()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.hermite() == other.hermite()
    }
}

impl Eq for Subgroup {}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn intersection_of_lattices() {
        let a = Subgroup::from_vectors(2, &[v(&[2, 0]), v(&[0, 3])]);
        let b = Subgroup::from_vectors(2, &[v(&[3, 0]), v(&[0, 2])]);
        let c = a.intersect(&b);
        assert_eq!(c, Subgroup::from_vectors(2, &[v(&[6, 0]), v(&[0, 6])]));
    }

    #[test]
    fn preimage_of_subgroup() {
        let f = IntMatrix::from_rows(&[vec![2, 1]]);
        let t = Subgroup::from_vectors(1, &[v(&[4])]);
        let p = Subgroup::preimage(&f, &t);
        assert!(p.contains(&v(&[2, 0])));
        assert!(p.contains(&v(&[0, 4])));
        assert!(p.contains(&v(&[1, 2])));
        assert!(!p.contains(&v(&[1, 0])));
    }

    #[test]
    fn equality_ignores_generator_choice() {
        let a = Subgroup::from_vectors(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subgroup::from_vectors(3, &[v(&[1, 2, 1]), v(&[1, 0, -1]), v(&[0, 1, 1])]);
        assert_eq!(a, b);
        assert!(a.is_subgroup_of(&Subgroup::full(3)));
        assert!(!Subgroup::full(3).is_subgroup_of(&a));
    }
}
