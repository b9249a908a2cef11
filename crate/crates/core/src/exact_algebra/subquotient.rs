use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{smith_normal_form, FgAbGroup, IntMatrix, Subgroup};
use crate::error::{Error, Result};

/// The group `Z / B` for subgroups `B ⊆ Z ⊆ Z^n`, with explicit coordinates.
///
/// `reduce` sends a vector of the numerator to its class in invariant-factor
/// coordinates of [`Subquotient::group`]; `section` lifts coordinate
/// generators back to the ambient module.
#[derive(Clone, Debug)]
pub struct Subquotient {
    numerator: Subgroup,
    denominator: Subgroup,
    group: FgAbGroup,
    // numerator basis, n × k
    basis: IntMatrix,
    // change of coordinates on Z^k putting the denominator in Smith form
    u: IntMatrix,
    u_inv: IntMatrix,
    // index of the first invariant factor different from 1
    offset: usize,
    // rank of the denominator
    relations: usize,
    moduli: Vec<BigInt>,
}

impl Subquotient {
    pub fn new(numerator: Subgroup, denominator: Subgroup) -> Result<Self> {
        if numerator.ambient() != denominator.ambient() {
            return Err(Error::Shape(format!(
                "numerator in Z^{} but denominator in Z^{}",
                numerator.ambient(),
                denominator.ambient()
            )));
        }
        let basis = numerator.basis().clone();
        let k = basis.cols();
        let mut coords = Vec::with_capacity(denominator.rank());
        for b in denominator.basis().columns() {
            let c = numerator.hermite().coordinates(&b).ok_or_else(|| {
                Error::NotASubgroup(format!(
                    "generator {:?} of the denominator is outside the numerator",
                    b.iter().map(ToString::to_string).collect::<Vec<_>>()
                ))
            })?;
            coords.push(c);
        }
        let rel = IntMatrix::from_columns(k, &coords);
        let snf = smith_normal_form(&rel);
        let factors = snf.invariant_factors();
        let offset = factors.iter().take_while(|d| d.is_one()).count();
        let moduli: Vec<BigInt> = factors[offset..].to_vec();
        let group = FgAbGroup::new(k - snf.rank, moduli.clone())?;
        Ok(Subquotient {
            numerator,
            denominator,
            group,
            basis,
            u: snf.u,
            u_inv: snf.u_inv,
            offset,
            relations: snf.rank,
            moduli,
        })
    }

    /// The free module `Z^n` itself.
    pub fn free(n: usize) -> Self {
        Self::new(Subgroup::full(n), Subgroup::zero(n)).expect("zero is a subgroup")
    }

    pub fn ambient(&self) -> usize {
        self.numerator.ambient()
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn numerator(&self) -> &Subgroup {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subgroup {
        &self.denominator
    }

    /// Coordinates of the class of `x` (which must lie in the numerator).
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self
            .numerator
            .hermite()
            .coordinates(x)
            .ok_or(Error::NotInSubgroup)?;
        let w = self.u.mul_vec(&y);
        let mut out = Vec::with_capacity(self.group.num_generators());
        for (i, m) in self.moduli.iter().enumerate() {
            out.push(w[self.offset + i].mod_floor(m));
        }
        out.extend(w[self.relations..].iter().cloned());
        Ok(out)
    }

    /// Ambient lifts of the coordinate generators, one column each.
    pub fn section_matrix(&self) -> IntMatrix {
        let cols: Vec<usize> = (self.offset..self.basis.cols()).collect();
        &self.basis * &self.u_inv.select_columns(&cols)
    }

    pub fn section(&self, i: usize) -> Vec<BigInt> {
        let w = self.u_inv.column(self.offset + i);
        self.basis.mul_vec(&w)
    }

    /// Lifts a coordinate vector to a representative in the numerator.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.section_matrix().mul_vec(coords)
    }

    pub fn is_trivial_class(&self, x: &[BigInt]) -> bool {
        self.denominator.contains(x)
    }
}

/// `Z / B` as a subquotient of `Z^ambient`.
pub fn subquotient(ambient: usize, numerator: &Subgroup, denominator: &Subgroup) -> Result<Subquotient> {
    if numerator.ambient() != ambient || denominator.ambient() != ambient {
        return Err(Error::Shape("subgroups do not live in the stated ambient module".into()));
    }
    Subquotient::new(numerator.clone(), denominator.clone())
}

/// Matrix, in invariant-factor coordinates, of the homomorphism
/// `source → target` induced by the ambient map `f`.
pub fn induced_map(f: &IntMatrix, source: &Subquotient, target: &Subquotient) -> Result<IntMatrix> {
    if f.cols() != source.ambient() || f.rows() != target.ambient() {
        return Err(Error::Shape(format!(
            "map is {}x{} between Z^{} and Z^{}",
            f.rows(),
            f.cols(),
            source.ambient(),
            target.ambient()
        )));
    }
    if !source.numerator().image(f).is_subgroup_of(target.numerator()) {
        return Err(Error::NotCompatible("numerator is not mapped into numerator".into()));
    }
    if !source.denominator().image(f).is_subgroup_of(target.denominator()) {
        return Err(Error::NotCompatible("denominator is not mapped into denominator".into()));
    }
    let n = source.group().num_generators();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let x = f.mul_vec(&source.section(i));
        cols.push(target.reduce(&x)?);
    }
    Ok(IntMatrix::from_columns(target.group().num_generators(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn direct_sum_split() {
        let q = Subquotient::new(Subgroup::full(2), Subgroup::from_vectors(2, &[v(&[2, 0])])).unwrap();
        assert_eq!(q.group(), &FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap());
    }

    #[test]
    fn quotient_by_itself_is_zero() {
        let z = Subgroup::from_vectors(3, &[v(&[1, 2, 0]), v(&[0, 1, 5])]);
        let q = Subquotient::new(z.clone(), z).unwrap();
        assert!(q.group().is_zero());
    }

    #[test]
    fn partial_torsion() {
        let z = Subgroup::from_vectors(3, &[v(&[1, 0, 0]), v(&[0, 2, 0])]);
        let b = Subgroup::from_vectors(3, &[v(&[2, 0, 0]), v(&[0, 2, 0])]);
        let q = Subquotient::new(z, b).unwrap();
        assert_eq!(q.group(), &FgAbGroup::cyclic(2));
    }

    #[test]
    fn containment_errors() {
        let z = Subgroup::from_vectors(2, &[v(&[2, 0])]);
        let b = Subgroup::from_vectors(2, &[v(&[1, 0])]);
        assert!(matches!(Subquotient::new(z.clone(), b), Err(Error::NotASubgroup(_))));
        let q = Subquotient::new(z, Subgroup::zero(2)).unwrap();
        assert_eq!(q.reduce(&v(&[1, 0])), Err(Error::NotInSubgroup));
    }

    #[test]
    fn reduce_inverts_section() {
        let z = Subgroup::from_vectors(2, &[v(&[3, 1]), v(&[0, 4])]);
        let b = Subgroup::from_vectors(2, &[v(&[6, 2]), v(&[0, 12])]);
        let q = Subquotient::new(z, b).unwrap();
        for i in 0..q.group().num_generators() {
            let mut e = vec![BigInt::from(0); q.group().num_generators()];
            e[i] = BigInt::one();
            assert_eq!(q.reduce(&q.section(i)).unwrap(), e);
        }
    }

    #[test]
    fn doubling_on_z_mod_4() {
        let q = Subquotient::new(Subgroup::full(1), Subgroup::from_vectors(1, &[v(&[4])])).unwrap();
        let m = induced_map(&IntMatrix::from_rows(&[vec![2]]), &q, &q).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![2]]));
        let id = induced_map(&IntMatrix::identity(1), &q, &q).unwrap();
        assert_eq!(id, IntMatrix::identity(1));
        let zero = induced_map(&IntMatrix::zeros(1, 1), &q, &q).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn incompatible_map() {
        let q = Subquotient::new(Subgroup::full(1), Subgroup::from_vectors(1, &[v(&[4])])).unwrap();
        let t = Subquotient::new(Subgroup::full(1), Subgroup::from_vectors(1, &[v(&[3])])).unwrap();
        assert!(matches!(
            induced_map(&IntMatrix::identity(1), &q, &t),
            Err(Error::NotCompatible(_))
        ));
    }
}
