use std::collections::BTreeMap;

use super::{CochainComplex, Filtration, SpectralSequence};
use crate::error::{Error, Result};
use crate::exact_algebra::{FgAbGroup, Subgroup, Subquotient};

/// `H^n(K)` with its induced filtration `L^p H^n = im(H^n(F^p K) → H^n(K))`.
#[derive(Clone, Debug)]
pub struct AbutmentDegree {
    pub cohomology: Subquotient,
    // (ker d ∩ F^p) + im d for p = p_min ..= p_max + 1
    levels: Vec<Subgroup>,
    graded: Vec<FgAbGroup>,
}

impl AbutmentDegree {
    /// Representatives of `L^p H^n` as a subgroup of `K^n` containing the
    /// coboundaries.
    pub fn level_subgroups(&self) -> &[Subgroup] {
        &self.levels
    }

    pub fn graded(&self) -> &[FgAbGroup] {
        &self.graded
    }
}

/// The filtered graded object a spectral sequence converges to.
#[derive(Clone, Debug)]
pub struct Abutment {
    p_min: i64,
    p_max: i64,
    degrees: BTreeMap<i64, AbutmentDegree>,
}

impl Abutment {
    pub fn p_min(&self) -> i64 {
        self.p_min
    }

    pub fn p_max(&self) -> i64 {
        self.p_max
    }

    pub fn degrees(&self) -> &BTreeMap<i64, AbutmentDegree> {
        &self.degrees
    }

    pub fn cohomology(&self, n: i64) -> FgAbGroup {
        self.degrees.get(&n).map(|d| d.cohomology.group().clone()).unwrap_or_default()
    }

    /// `L^p H^n` as a subgroup of the cocycles modulo coboundaries.
    pub fn level_subgroup(&self, p: i64, n: i64) -> Option<Subgroup> {
        let d = self.degrees.get(&n)?;
        let i = (p.clamp(self.p_min, self.p_max + 1) - self.p_min) as usize;
        Some(d.levels[i].clone())
    }

    /// `L^p H^n` up to isomorphism.
    pub fn level(&self, p: i64, n: i64) -> FgAbGroup {
        match (self.degrees.get(&n), self.level_subgroup(p, n)) {
            (Some(d), Some(s)) => Subquotient::new(s, d.cohomology.denominator().clone())
                .map(|q| q.group().clone())
                .unwrap_or_default(),
            _ => FgAbGroup::zero(),
        }
    }

    /// `Gr^p H^n = L^p / L^{p+1}`.
    pub fn graded(&self, p: i64, n: i64) -> FgAbGroup {
        if p < self.p_min || p > self.p_max {
            return FgAbGroup::zero();
        }
        self.degrees
            .get(&n)
            .map(|d| d.graded[(p - self.p_min) as usize].clone())
            .unwrap_or_default()
    }

    /// Whether two abutments of the same complex induce the same filtration
    /// on cohomology, compared as chains of subgroups without regard to
    /// indexing of the levels below and above the range where they change.
    pub fn same_filtration(&self, other: &Abutment) -> bool {
        if self.degrees.keys().ne(other.degrees.keys()) {
            return false;
        }
        let lo = self.p_min.min(other.p_min);
        let hi = self.p_max.max(other.p_max) + 1;
        self.degrees.keys().all(|&n| {
            (lo..=hi).all(|p| self.level_subgroup(p, n) == other.level_subgroup(p, n))
        })
    }
}

/// Cohomology of `K`, the filtration induced by `F`, and its graded pieces,
/// checked against `E_∞` at the stabilization page.
pub fn abutment(complex: &CochainComplex, filtration: &Filtration) -> Result<Abutment> {
    let mut ss = SpectralSequence::new(complex, filtration)?;
    let (p_min, p_max) = (filtration.p_min(), filtration.p_max());
    let mut degrees = BTreeMap::new();
    for n in complex.degrees() {
        let cohomology = complex.cohomology(n);
        let cocycles = complex.cocycles(n);
        let coboundaries = complex.coboundaries(n);
        let levels: Vec<Subgroup> = (p_min..=p_max + 1)
            .map(|p| cocycles.intersect(&filtration.level(p, n)).sum(&coboundaries))
            .collect();
        let graded = levels
            .windows(2)
            .map(|w| Subquotient::new(w[0].clone(), w[1].clone()).map(|s| s.group().clone()))
            .collect::<Result<Vec<_>>>()?;
        degrees.insert(
            n,
            AbutmentDegree {
                cohomology,
                levels,
                graded,
            },
        );
    }
    let result = Abutment {
        p_min,
        p_max,
        degrees,
    };
    let e_inf = ss.page(ss.stabilization_page())?;
    for n in complex.degrees() {
        for p in p_min..=p_max {
            let (e, g) = (e_inf.page().group(p, n - p), result.graded(p, n));
            if e != g {
                return Err(Error::Convergence(format!(
                    "E_∞^{{{p},{}}} = {e} but Gr^{p} H^{n} = {g}",
                    n - p
                )));
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::IntMatrix;

    #[test]
    fn trivial_filtration_has_one_graded_piece() {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![3]])]).unwrap();
        let a = abutment(&k, &Filtration::trivial(&k)).unwrap();
        assert_eq!(a.cohomology(1), FgAbGroup::cyclic(3));
        assert_eq!(a.level(0, 1), FgAbGroup::cyclic(3));
        assert_eq!(a.level(1, 1), FgAbGroup::zero());
        assert_eq!(a.graded(0, 1), FgAbGroup::cyclic(3));
    }

    #[test]
    fn d2_fixture_is_acyclic() {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap();
        let f = Filtration::basis_aligned(&k, &[vec![0], vec![2]]).unwrap();
        let a = abutment(&k, &f).unwrap();
        for n in 0..=1 {
            assert!(a.cohomology(n).is_zero());
            for p in 0..=2 {
                assert!(a.graded(p, n).is_zero());
            }
        }
    }
}
